#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "srploc/config_json.hpp"
#include "srploc/errors.hpp"
#include "srploc/geometry.hpp"
#include "srploc/pipeline.hpp"
#include "srploc/scene_sim.hpp"
#include "srploc/wav_io.hpp"

namespace srploc::cli {

namespace {

using config_json::AppConfig;

// SRPLOC_LOG=quiet|info|debug (default info).
int log_level() {
  const char* env = std::getenv("SRPLOC_LOG");
  if (!env) return 1;
  const std::string v(env);
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

void debug(std::ostream& err, const std::string& msg) {
  if (log_level() >= 2) err << "srploc: " << msg << '\n';
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string parent_dir(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

// Flag overrides applied on top of the config file, re-validated afterwards.
struct Overrides {
  std::optional<double> grid_radius;
  std::optional<double> azimuth_step;
  std::optional<double> elevation_step;
  std::optional<int> max_sources;
  std::optional<double> suppression_radius;
  std::optional<long> seed;

  void add_flags(CLI::App& cmd) {
    cmd.add_option("--radius", grid_radius, "Grid radius override (m)");
    cmd.add_option("--azimuth-step", azimuth_step, "Grid azimuth step override (deg)");
    cmd.add_option("--elevation-step", elevation_step, "Grid elevation step override (deg)");
    cmd.add_option("--max-sources", max_sources, "Number of sources to report");
    cmd.add_option("--suppression-radius", suppression_radius,
                   "Peak suppression radius override (deg)");
    cmd.add_option("--seed", seed, "Scene seed override");
  }

  void apply(AppConfig& config) const {
    if (grid_radius) config.localizer.grid.radius = *grid_radius;
    if (azimuth_step) config.localizer.grid.azimuth_step = *azimuth_step;
    if (elevation_step) config.localizer.grid.elevation_step = *elevation_step;
    if (max_sources) config.localizer.max_sources = *max_sources;
    if (suppression_radius) config.localizer.suppression_radius = *suppression_radius;
    if (seed && config.scene) config.scene->seed = static_cast<std::uint64_t>(*seed);
    pipeline::validate(config.localizer);
  }
};

AppConfig load_config(const std::string& path, const Overrides& overrides) {
  AppConfig config = config_json::app_config_from_json(read_text_file(path), parent_dir(path));
  overrides.apply(config);
  return config;
}

nlohmann::json estimates_json(const std::vector<srp_grid::DoaEstimate>& estimates) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : estimates)
    list.push_back({{"azimuth", e.azimuth}, {"elevation", e.elevation}, {"power", e.power}});
  return list;
}

int cmd_simulate(const std::string& config_path, const std::string& output_path,
                 const Overrides& overrides, std::ostream& out, std::ostream& err) {
  const AppConfig config = load_config(config_path, overrides);
  if (!config.scene) throw ConfigError("scene: section required for simulate");

  const auto audio = scene_sim::synthesize(*config.scene, config.localizer.array);
  wav_io::write_wav(output_path, audio);
  debug(err, "wrote " + std::to_string(audio.channel_count()) + " channels to " + output_path);

  nlohmann::json truth;
  truth["sources"] = nlohmann::json::array();
  for (const auto& s : config.scene->sources)
    truth["sources"].push_back({{"azimuth", s.azimuth},
                                {"elevation", s.elevation},
                                {"range", s.range},
                                {"level", s.level}});
  truth["sample_rate"] = config.scene->sample_rate;
  truth["duration"] = config.scene->duration;
  truth["seed"] = config.scene->seed;
  truth["channels"] = audio.channel_count();
  out << truth.dump(2) << '\n';
  return kOk;
}

int cmd_localize(const std::string& wav_path, const std::string& config_path,
                 const std::string& dump_srp_path, bool as_json, const Overrides& overrides,
                 std::ostream& out, std::ostream& err) {
  AppConfig config = load_config(config_path, overrides);
  if (!dump_srp_path.empty()) config.localizer.keep_srp_map = true;

  const auto audio = wav_io::read_wav(wav_path);
  if (audio.channel_count() != config.localizer.array.mics.size())
    throw ConfigError("array.mics: WAV has " + std::to_string(audio.channel_count()) +
                      " channels but the array has " +
                      std::to_string(config.localizer.array.mics.size()) + " microphones");
  debug(err, "localizing " + std::to_string(audio.sample_count()) + " samples");

  const auto result = pipeline::localize(audio, config.localizer);

  if (!dump_srp_path.empty()) {
    std::ofstream csv(dump_srp_path);
    if (!csv) throw IoError("cannot open " + dump_srp_path + " for writing");
    const auto grid = srp_grid::build_grid(config.localizer.grid.radius,
                                           config.localizer.grid.azimuth_step,
                                           config.localizer.grid.elevation_step);
    srp_grid::write_srp_csv(csv, *result.srp_map, grid);
  }

  if (as_json) {
    nlohmann::json doc;
    doc["estimates"] = estimates_json(result.estimates);
    doc["frames_used"] = result.frames_used;
    doc["elapsed_seconds"] = result.elapsed;
    doc["config"] = nlohmann::json::parse(config_json::effective_config_json(config));
    out << doc.dump(2) << '\n';
  } else {
    for (const auto& e : result.estimates)
      out << "azimuth=" << e.azimuth << " elevation=" << e.elevation << " power=" << e.power
          << '\n';
    out << "frames_used=" << result.frames_used << " elapsed=" << result.elapsed << "s\n";
  }
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& output_path,
              const Overrides& overrides, std::ostream& out, std::ostream& err) {
  AppConfig config = load_config(config_path, overrides);
  scene_sim::SceneConfig base;
  if (config.scene) {
    base = *config.scene;
  } else {
    // Default: one source at (-4, -45) swept over distance with fixed
    // sensor noise strong enough that accuracy degrades with range.
    base.sources.push_back({-4.0, -45.0, 1.5, 1.0, scene_sim::Excitation::white_noise, {}});
    base.noise_rms = 4.0;
    base.duration = 0.5;
  }
  if (base.sources.size() != 1) throw ConfigError("scene.sources: sweep needs exactly one source");

  debug(err, "sweeping " + std::to_string(config.sweep.distances.size()) + " distances x " +
                 std::to_string(config.sweep.trials) + " trials");
  const auto rows = pipeline::run_distance_sweep(base, config.sweep, config.localizer);

  std::ofstream csv(output_path);
  if (!csv) throw IoError("cannot open " + output_path + " for writing");
  pipeline::write_sweep_csv(csv, rows);
  out << "wrote " << rows.size() << " rows to " << output_path << '\n';
  return kOk;
}

int cmd_track(const std::string& config_path, const std::string& output_path,
              const Overrides& overrides, std::ostream& out, std::ostream& err) {
  const AppConfig config = load_config(config_path, overrides);
  if (!config.scene) throw ConfigError("scene: section required for track");

  debug(err, "tracking for " + std::to_string(config.tracking.duration) + " s");
  const auto log =
      pipeline::track_and_drive(*config.scene, config.localizer, config.drive, config.tracking);

  std::ofstream csv(output_path);
  if (!csv) throw IoError("cannot open " + output_path + " for writing");
  vehicle::write_trajectory_csv(csv, log);

  if (log.empty()) {
    out << "empty trajectory (duration 0)\n";
    return kOk;
  }
  const auto& last = log.back();
  const auto target = scene_sim::source_position(config.scene->sources.front());
  // Pose after the last logged cycle's step.
  vehicle::VehicleState state{last.x, last.y, last.heading};
  state = vehicle::step(state, vehicle::heading_controller(last.azimuth_error,
                                                           config.tracking.controller),
                        1.0 / config.tracking.control_rate);
  const double distance = std::hypot(target.x - state.x, target.y - state.y);
  out << "final_heading_error_deg=" << geometry::rad_to_deg(last.azimuth_error)
      << " distance_to_source_m=" << distance << " cycles=" << log.size() << '\n';
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GCC-PHAT grid-search sound source localization toolkit", "srploc"};
  app.require_subcommand(1);

  Overrides overrides;

  auto* simulate = app.add_subcommand("simulate", "Synthesize a scene to a multichannel WAV");
  std::string sim_config, sim_output;
  simulate->add_option("config", sim_config, "Config JSON with a scene section")->required();
  simulate->add_option("-o,--output", sim_output, "Output WAV path")->required();
  overrides.add_flags(*simulate);

  auto* localize = app.add_subcommand("localize", "Estimate source directions from a WAV");
  std::string loc_wav, loc_config, loc_dump;
  bool loc_json = false;
  localize->add_option("wav", loc_wav, "Input multichannel WAV")->required();
  localize->add_option("config", loc_config, "Config JSON")->required();
  localize->add_option("--dump-srp", loc_dump, "Write the SRP map CSV here");
  localize->add_flag("--json", loc_json, "Machine-readable JSON output");
  overrides.add_flags(*localize);

  auto* sweep = app.add_subcommand("sweep", "Distance vs azimuth-MSE sweep");
  std::string sweep_config, sweep_output;
  sweep->add_option("config", sweep_config, "Config JSON")->required();
  sweep->add_option("-o,--output", sweep_output, "Output CSV path")->required();
  overrides.add_flags(*sweep);

  auto* track = app.add_subcommand("track", "Closed-loop drive toward the strongest source");
  std::string track_config, track_output;
  track->add_option("config", track_config, "Config JSON with a scene section")->required();
  track->add_option("-o,--output", track_output, "Output trajectory CSV path")->required();
  overrides.add_flags(*track);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage;
    const int code = app.exit(e, out, usage);
    if (code == 0) return kOk;  // --help
    err << usage.str();
    return kConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_output, overrides, out, err);
    if (localize->parsed())
      return cmd_localize(loc_wav, loc_config, loc_dump, loc_json, overrides, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_output, overrides, out, err);
    if (track->parsed()) return cmd_track(track_config, track_output, overrides, out, err);
  } catch (const NoSignal& e) {
    err << "srploc: no signal: " << e.what() << '\n';
    return kNoSignal;
  } catch (const ConfigError& e) {
    err << "srploc: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "srploc: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "srploc: io error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}

}  // namespace srploc::cli
