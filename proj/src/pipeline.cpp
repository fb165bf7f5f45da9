#include "srploc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "srploc/errors.hpp"

namespace srploc::pipeline {

using geometry::Vec3;

void validate(const LocalizerConfig& config) {
  if (config.array.mics.size() < 2) throw ConfigError("array.mics: need at least 2 microphones");
  if (!(config.grid.radius > 0.0)) throw ConfigError("grid.radius: must be > 0");
  if (!(config.grid.radius > config.array.circumradius()))
    throw ConfigError("grid.radius: must exceed the array circumradius");
  if (!(config.grid.azimuth_step > 0.0)) throw ConfigError("grid.azimuth_step: must be > 0");
  if (!(config.grid.elevation_step > 0.0)) throw ConfigError("grid.elevation_step: must be > 0");
  if (config.frames.length < 2) throw ConfigError("frames.length: must be >= 2");
  if (config.frames.hop == 0 || config.frames.hop > config.frames.length)
    throw ConfigError("frames.hop: must be in (0, frames.length]");
  if (config.regularization < 0.0 || !std::isfinite(config.regularization))
    throw ConfigError("regularization: must be >= 0");
  if (config.max_sources < 1) throw ConfigError("max_sources: must be >= 1");
  if (!(config.suppression_radius > 0.0)) throw ConfigError("suppression_radius: must be > 0");
  if (!(config.energy_floor >= 0.0)) throw ConfigError("energy_floor: must be >= 0");
}

Localizer::Localizer(LocalizerConfig config, double sample_rate)
    : config_(std::move(config)), sample_rate_(sample_rate) {
  validate(config_);
  if (!(sample_rate_ > 0.0)) throw ConfigError("sample_rate: must be > 0");
  try {
    grid_ = srp_grid::build_grid(config_.grid.radius, config_.grid.azimuth_step,
                                 config_.grid.elevation_step);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  pairs_ = geometry::enumerate_pairs(config_.array);
  table_ = srp_grid::build_delay_table(grid_, config_.array, pairs_, sample_rate_);
  if (static_cast<double>(config_.frames.length) <= 2.0 * table_.max_abs_shift)
    throw ConfigError("frames.length: must exceed twice the maximum delay-table shift (" +
                      std::to_string(table_.max_abs_shift) + " samples)");
}

LocalizationResult Localizer::run(const AudioBuffer& audio) const {
  const auto start_time = std::chrono::steady_clock::now();
  if (audio.channel_count() != config_.array.mics.size())
    throw InvalidArgument("channel count (" + std::to_string(audio.channel_count()) +
                          ") does not match the array (" +
                          std::to_string(config_.array.mics.size()) + " mics)");
  if (audio.sample_rate != sample_rate_)
    throw InvalidArgument("audio sample rate does not match the localizer");
  if (audio.sample_count() < config_.frames.length)
    throw InvalidArgument("input shorter than one frame");

  const auto frames = spectral::frame_stream(audio.channels, sample_rate_, config_.frames.length,
                                             config_.frames.hop, config_.frames.window);

  srp_grid::SrpMap map = srp_grid::make_srp_map(grid_);
  std::vector<spectral::CorrelationFunction> correlations(pairs_.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    // Energy gate on the raw (unwindowed) slice.
    const std::size_t frame_start = f * config_.frames.hop;
    double max_rms = 0.0;
    for (const auto& channel : audio.channels) {
      double acc = 0.0;
      for (std::size_t i = 0; i < config_.frames.length; ++i) {
        const double s = channel[frame_start + i];
        acc += s * s;
      }
      max_rms = std::max(max_rms, std::sqrt(acc / static_cast<double>(config_.frames.length)));
    }
    if (max_rms < config_.energy_floor) continue;

    // Lag convention: correlate (channel_b, channel_a) so that a source at
    // grid point g peaks exactly at the tabulated shift (t_a - t_b) * fs.
    const auto& per_channel = frames[f];
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      correlations[p] = spectral::gcc_phat(per_channel[pairs_[p].index_b],
                                           per_channel[pairs_[p].index_a],
                                           config_.regularization);
    }
    srp_grid::accumulate_srp(correlations, table_, map);
  }

  if (map.frames_accumulated == 0)
    throw NoSignal("every frame fell below the energy floor");

  LocalizationResult result;
  result.frames_used = map.frames_accumulated;
  result.estimates =
      srp_grid::find_peaks(map, grid_, config_.max_sources, config_.suppression_radius);
  if (config_.keep_srp_map) result.srp_map = std::move(map);
  result.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return result;
}

LocalizationResult localize(const AudioBuffer& audio, const LocalizerConfig& config) {
  return Localizer(config, audio.sample_rate).run(audio);
}

namespace {

// splitmix64 finalizer; decorrelates per-cycle and per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Source position relative to a moved/rotated array (body frame).
scene_sim::SourceSpec relative_source(const scene_sim::SourceSpec& spec, const Vec3& world_pos,
                                      const vehicle::VehicleState& state) {
  const double c = std::cos(-state.heading);
  const double s = std::sin(-state.heading);
  const Vec3 d{world_pos.x - state.x, world_pos.y - state.y, world_pos.z};
  const Vec3 body{c * d.x - s * d.y, s * d.x + c * d.y, d.z};

  scene_sim::SourceSpec rel = spec;
  rel.range = geometry::norm(body);
  geometry::angles_from_direction(body, rel.azimuth, rel.elevation);
  return rel;
}

}  // namespace

std::vector<vehicle::TrajectorySample> run_heading_loop(
    const AzimuthMeasurement& measure, const vehicle::DriveGeometry& drive,
    const vehicle::ControllerParams& controller, double duration, double dt,
    const StopPredicate& stop) {
  if (!(dt > 0.0)) throw InvalidArgument("control period must be > 0");
  if (duration < 0.0) throw InvalidArgument("duration must be >= 0");
  vehicle::validate(drive);

  std::vector<vehicle::TrajectorySample> log;
  vehicle::VehicleState state;
  const auto cycles = static_cast<long>(std::floor(duration / dt + 1e-9));
  for (long k = 0; k < cycles; ++k) {
    const double t = static_cast<double>(k) * dt;
    const auto error = measure(state, t);
    const vehicle::BodyTwist twist =
        error ? vehicle::heading_controller(*error, controller) : vehicle::BodyTwist{};
    const auto wheels = vehicle::inverse_kinematics(twist, drive);

    log.push_back({t, state.x, state.y, state.heading, error.value_or(0.0), wheels.speeds});
    state = vehicle::step(state, twist, dt);
    if (stop && stop(state)) break;
  }
  return log;
}

std::vector<vehicle::TrajectorySample> track_and_drive(const scene_sim::SceneConfig& scene,
                                                       const LocalizerConfig& localizer,
                                                       const vehicle::DriveGeometry& drive,
                                                       const TrackingParams& params) {
  if (!(params.control_rate > 0.0)) throw ConfigError("tracking.control_rate: must be > 0");
  if (!(params.audio_window > 0.0)) throw ConfigError("tracking.audio_window: must be > 0");
  if (params.duration < 0.0) throw ConfigError("tracking.duration: must be >= 0");
  if (!(params.stop_range >= 0.0)) throw ConfigError("tracking.stop_range: must be >= 0");

  const Localizer engine(localizer, scene.sample_rate);

  // Sources live at fixed world positions; the vehicle starts at the origin
  // with heading 0, so the scene's directions are world directions.
  std::vector<Vec3> world_positions;
  world_positions.reserve(scene.sources.size());
  for (const auto& s : scene.sources) world_positions.push_back(scene_sim::source_position(s));

  long cycle = 0;
  const auto measure = [&](const vehicle::VehicleState& state,
                           double /*t*/) -> std::optional<double> {
    scene_sim::SceneConfig window = scene;
    window.duration = params.audio_window;
    window.seed = mix_seed(scene.seed, static_cast<std::uint64_t>(cycle));
    for (std::size_t i = 0; i < window.sources.size(); ++i)
      window.sources[i] = relative_source(scene.sources[i], world_positions[i], state);
    ++cycle;

    try {
      const auto result = engine.run(scene_sim::synthesize(window, localizer.array));
      if (result.estimates.empty()) return std::nullopt;
      // Steer toward the strongest source's azimuth.
      return geometry::deg_to_rad(result.estimates.front().azimuth);
    } catch (const NoSignal&) {
      return std::nullopt;
    }
  };

  const auto stop = [&](const vehicle::VehicleState& state) {
    for (const auto& pos : world_positions) {
      const double dx = pos.x - state.x;
      const double dy = pos.y - state.y;
      if (std::hypot(dx, dy) <= params.stop_range) return true;
    }
    return false;
  };

  return run_heading_loop(measure, drive, params.controller, params.duration,
                          1.0 / params.control_rate, stop);
}

std::vector<double> default_sweep_distances() {
  std::vector<double> distances;
  for (int cm = 50; cm <= 300; cm += 10) distances.push_back(static_cast<double>(cm) / 100.0);
  return distances;
}

std::vector<SweepRow> run_distance_sweep(const scene_sim::SceneConfig& base_scene,
                                         const SweepParams& params,
                                         const LocalizerConfig& localizer) {
  if (base_scene.sources.size() != 1)
    throw InvalidArgument("distance sweep requires a single-source scene");
  if (params.trials < 1) throw InvalidArgument("sweep trials must be >= 1");
  if (params.distances.empty()) throw InvalidArgument("sweep needs at least one distance");
  for (std::size_t i = 0; i < params.distances.size(); ++i) {
    if (!(params.distances[i] > 0.0)) throw InvalidArgument("sweep distances must be positive");
    if (i > 0 && params.distances[i] <= params.distances[i - 1])
      throw InvalidArgument("sweep distances must be ascending");
  }

  const Localizer engine(localizer, base_scene.sample_rate);
  const double true_azimuth = base_scene.sources.front().azimuth;

  std::vector<SweepRow> rows;
  rows.reserve(params.distances.size());
  for (std::size_t d = 0; d < params.distances.size(); ++d) {
    double sum_sq = 0.0;
    for (int trial = 0; trial < params.trials; ++trial) {
      scene_sim::SceneConfig scene = base_scene;
      scene.sources.front().range = params.distances[d];
      scene.seed = mix_seed(base_scene.seed, d * 10007ULL + static_cast<std::uint64_t>(trial));
      double error = 180.0;  // failed trials count as maximum error
      try {
        const auto result = engine.run(scene_sim::synthesize(scene, localizer.array));
        if (!result.estimates.empty())
          error = geometry::wrap_degrees(result.estimates.front().azimuth - true_azimuth);
      } catch (const NoSignal&) {
      }
      sum_sq += error * error;
    }
    rows.push_back({params.distances[d], sum_sq / static_cast<double>(params.trials)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "distance_cm,mse_deg2\n";
  for (const auto& row : rows) out << std::lround(row.distance * 100.0) << ',' << row.mse_deg2 << '\n';
}

}  // namespace srploc::pipeline
