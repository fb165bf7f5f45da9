#include "srploc/config_json.hpp"

#include <cmath>
#include <filesystem>

#include "json.hpp"
#include "srploc/errors.hpp"
#include "srploc/wav_io.hpp"

namespace srploc::config_json {

using nlohmann::json;

namespace {

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": must be a number");
  return v.get<double>();
}

long get_integer(const json& obj, const std::string& path, const char* key, long fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path + "." + key + ": must be an integer");
  return v.get<long>();
}

const json& get_object(const json& obj, const std::string& path, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_object()) throw ConfigError(path + "." + key + ": must be an object");
  return v;
}

geometry::MicArray parse_array(const json& section) {
  if (section.contains("preset")) {
    const std::string preset = section.at("preset").get<std::string>();
    if (preset != "cubical") throw ConfigError("array.preset: unknown preset '" + preset + "'");
    return geometry::cubical_array(
        get_number(section, "array", "edge_length", 0.15),
        get_number(section, "array", "speed_of_sound", geometry::kDefaultSpeedOfSound));
  }
  return geometry::mic_array_from_json(section.dump());
}

spectral::Window parse_window(const json& frames) {
  const std::string name = frames.value("window", "hann");
  if (name == "hann") return spectral::Window::hann;
  if (name == "rectangular") return spectral::Window::rectangular;
  throw ConfigError("frames.window: must be 'hann' or 'rectangular'");
}

scene_sim::SourceSpec parse_source(const json& src, std::size_t index,
                                   const std::string& base_dir) {
  const std::string path = "scene.sources[" + std::to_string(index) + "]";
  scene_sim::SourceSpec spec;
  spec.azimuth = get_number(src, path, "azimuth", 0.0);
  spec.elevation = get_number(src, path, "elevation", 0.0);
  spec.range = get_number(src, path, "range", 1.5);
  spec.level = get_number(src, path, "level", 1.0);
  if (src.contains("excitation")) {
    const auto& e = src.at("excitation");
    if (e.is_string()) {
      const std::string name = e.get<std::string>();
      if (name == "white_noise")
        spec.excitation = scene_sim::Excitation::white_noise;
      else if (name == "speech_noise")
        spec.excitation = scene_sim::Excitation::speech_noise;
      else
        throw ConfigError(path + ".excitation: must be 'white_noise', 'speech_noise' or "
                          "{\"file\": <wav path>}");
    } else if (e.is_object() && e.contains("file")) {
      spec.excitation = scene_sim::Excitation::file_samples;
      std::filesystem::path file = e.at("file").get<std::string>();
      if (file.is_relative() && !base_dir.empty()) file = std::filesystem::path(base_dir) / file;
      const auto audio = wav_io::read_wav(file.string());
      if (audio.channels.empty() || audio.channels.front().empty())
        throw ConfigError(path + ".excitation.file: WAV has no samples");
      spec.samples = audio.channels.front();
    } else {
      throw ConfigError(path + ".excitation: unrecognized value");
    }
  }
  return spec;
}

scene_sim::SceneConfig parse_scene(const json& section, const std::string& base_dir) {
  scene_sim::SceneConfig scene;
  if (!section.contains("sources") || !section.at("sources").is_array() ||
      section.at("sources").empty())
    throw ConfigError("scene.sources: must be a non-empty array");
  std::size_t i = 0;
  for (const auto& src : section.at("sources")) scene.sources.push_back(parse_source(src, i++, base_dir));
  scene.noise_rms = get_number(section, "scene", "noise_rms", 0.0);
  scene.duration = get_number(section, "scene", "duration", 1.0);
  scene.sample_rate = get_number(section, "scene", "sample_rate", 16000.0);
  scene.seed = static_cast<std::uint64_t>(get_integer(section, "scene", "seed", 0));
  if (!(scene.duration > 0.0)) throw ConfigError("scene.duration: must be > 0");
  if (!(scene.sample_rate > 0.0)) throw ConfigError("scene.sample_rate: must be > 0");
  if (scene.noise_rms < 0.0) throw ConfigError("scene.noise_rms: must be >= 0");
  return scene;
}

pipeline::LocalizerConfig parse_localizer(const json& doc) {
  pipeline::LocalizerConfig config;
  if (doc.contains("array")) config.array = parse_array(get_object(doc, "", "array"));
  if (doc.contains("grid")) {
    const auto& grid = get_object(doc, "", "grid");
    config.grid.radius = get_number(grid, "grid", "radius", config.grid.radius);
    config.grid.azimuth_step = get_number(grid, "grid", "azimuth_step", config.grid.azimuth_step);
    config.grid.elevation_step =
        get_number(grid, "grid", "elevation_step", config.grid.elevation_step);
  }
  if (doc.contains("frames")) {
    const auto& frames = get_object(doc, "", "frames");
    const long length =
        get_integer(frames, "frames", "length", static_cast<long>(config.frames.length));
    const long hop = get_integer(frames, "frames", "hop", static_cast<long>(config.frames.hop));
    if (length < 2) throw ConfigError("frames.length: must be >= 2");
    if (hop < 1) throw ConfigError("frames.hop: must be >= 1");
    config.frames.length = static_cast<std::size_t>(length);
    config.frames.hop = static_cast<std::size_t>(hop);
    config.frames.window = parse_window(frames);
  }
  config.regularization = get_number(doc, "", "regularization", config.regularization);
  config.max_sources =
      static_cast<int>(get_integer(doc, "", "max_sources", config.max_sources));
  config.suppression_radius =
      get_number(doc, "", "suppression_radius", config.suppression_radius);
  config.energy_floor = get_number(doc, "", "energy_floor", config.energy_floor);
  pipeline::validate(config);
  return config;
}

pipeline::SweepParams parse_sweep(const json& section) {
  pipeline::SweepParams sweep{pipeline::default_sweep_distances(), 20};
  if (section.contains("distances")) {
    if (!section.at("distances").is_array())
      throw ConfigError("sweep.distances: must be an array of meters");
    sweep.distances.clear();
    for (const auto& d : section.at("distances")) sweep.distances.push_back(d.get<double>());
  } else if (section.contains("start") || section.contains("stop")) {
    const double start = get_number(section, "sweep", "start", 0.5);
    const double stop = get_number(section, "sweep", "stop", 3.0);
    const double step = get_number(section, "sweep", "step", 0.1);
    if (!(step > 0.0) || stop < start) throw ConfigError("sweep.step: bad start/stop/step range");
    sweep.distances.clear();
    for (double d = start; d <= stop + 1e-9; d += step) sweep.distances.push_back(d);
  }
  sweep.trials = static_cast<int>(get_integer(section, "sweep", "trials", sweep.trials));
  return sweep;
}

vehicle::DriveGeometry parse_drive(const json& section) {
  vehicle::DriveGeometry drive;
  if (section.contains("wheel_angles")) {
    const auto& angles = section.at("wheel_angles");
    if (!angles.is_array() || angles.size() != 3)
      throw ConfigError("vehicle.wheel_angles: must be an array of 3 degrees");
    for (int i = 0; i < 3; ++i) drive.wheel_angles_deg[i] = angles[i].get<double>();
  }
  drive.wheel_radius = get_number(section, "vehicle", "wheel_radius", drive.wheel_radius);
  drive.body_radius = get_number(section, "vehicle", "body_radius", drive.body_radius);
  vehicle::validate(drive);
  return drive;
}

pipeline::TrackingParams parse_tracking(const json& doc) {
  pipeline::TrackingParams params;
  if (doc.contains("tracking")) {
    const auto& t = get_object(doc, "", "tracking");
    params.duration = get_number(t, "tracking", "duration", params.duration);
    params.control_rate = get_number(t, "tracking", "control_rate", params.control_rate);
    params.audio_window = get_number(t, "tracking", "audio_window", params.audio_window);
    params.stop_range = get_number(t, "tracking", "stop_range", params.stop_range);
  }
  if (doc.contains("controller")) {
    const auto& c = get_object(doc, "", "controller");
    auto& ctl = params.controller;
    ctl.gain = get_number(c, "controller", "gain", ctl.gain);
    ctl.max_omega = get_number(c, "controller", "max_omega", ctl.max_omega);
    ctl.forward_speed = get_number(c, "controller", "forward_speed", ctl.forward_speed);
    // config value is degrees, like every other angle in the file
    ctl.deadband = geometry::deg_to_rad(
        get_number(c, "controller", "deadband", geometry::rad_to_deg(ctl.deadband)));
    if (ctl.gain < 0.0 || ctl.max_omega < 0.0 || ctl.forward_speed < 0.0)
      throw ConfigError("controller: gains and limits must be >= 0");
  }
  return params;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

AppConfig app_config_from_json(const std::string& text, const std::string& base_dir) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");

  AppConfig config;
  config.localizer = parse_localizer(doc);
  if (doc.contains("scene")) config.scene = parse_scene(get_object(doc, "", "scene"), base_dir);
  if (doc.contains("sweep")) config.sweep = parse_sweep(get_object(doc, "", "sweep"));
  if (doc.contains("vehicle")) config.drive = parse_drive(get_object(doc, "", "vehicle"));
  config.tracking = parse_tracking(doc);
  return config;
}

scene_sim::SceneConfig scene_from_json(const std::string& text, const std::string& base_dir) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ConfigError("scene: top level must be an object");
  return parse_scene(doc, base_dir);
}

std::string effective_config_json(const AppConfig& config) {
  json doc;
  json mics = json::array();
  for (const auto& m : config.localizer.array.mics) mics.push_back({m.x, m.y, m.z});
  doc["array"] = {{"speed_of_sound", config.localizer.array.speed_of_sound}, {"mics", mics}};
  doc["grid"] = {{"radius", config.localizer.grid.radius},
                 {"azimuth_step", config.localizer.grid.azimuth_step},
                 {"elevation_step", config.localizer.grid.elevation_step}};
  doc["frames"] = {
      {"length", config.localizer.frames.length},
      {"hop", config.localizer.frames.hop},
      {"window",
       config.localizer.frames.window == spectral::Window::hann ? "hann" : "rectangular"}};
  doc["regularization"] = config.localizer.regularization;
  doc["max_sources"] = config.localizer.max_sources;
  doc["suppression_radius"] = config.localizer.suppression_radius;
  doc["energy_floor"] = config.localizer.energy_floor;
  if (config.scene) {
    json sources = json::array();
    for (const auto& s : config.scene->sources) {
      json src = {{"azimuth", s.azimuth},
                  {"elevation", s.elevation},
                  {"range", s.range},
                  {"level", s.level}};
      switch (s.excitation) {
        case scene_sim::Excitation::white_noise: src["excitation"] = "white_noise"; break;
        case scene_sim::Excitation::speech_noise: src["excitation"] = "speech_noise"; break;
        case scene_sim::Excitation::file_samples: src["excitation"] = "file"; break;
      }
      sources.push_back(src);
    }
    doc["scene"] = {{"sources", sources},
                    {"noise_rms", config.scene->noise_rms},
                    {"duration", config.scene->duration},
                    {"sample_rate", config.scene->sample_rate},
                    {"seed", config.scene->seed}};
  }
  doc["sweep"] = {{"distances", config.sweep.distances}, {"trials", config.sweep.trials}};
  doc["vehicle"] = {{"wheel_angles", config.drive.wheel_angles_deg},
                    {"wheel_radius", config.drive.wheel_radius},
                    {"body_radius", config.drive.body_radius}};
  doc["tracking"] = {{"duration", config.tracking.duration},
                     {"control_rate", config.tracking.control_rate},
                     {"audio_window", config.tracking.audio_window},
                     {"stop_range", config.tracking.stop_range}};
  doc["controller"] = {{"gain", config.tracking.controller.gain},
                       {"max_omega", config.tracking.controller.max_omega},
                       {"forward_speed", config.tracking.controller.forward_speed},
                       {"deadband", geometry::rad_to_deg(config.tracking.controller.deadband)}};
  return doc.dump(2);
}

}  // namespace srploc::config_json
