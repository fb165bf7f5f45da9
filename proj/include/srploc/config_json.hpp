#pragma once

#include <optional>
#include <string>

#include "srploc/pipeline.hpp"
#include "srploc/scene_sim.hpp"
#include "srploc/vehicle.hpp"

namespace srploc::config_json {

/// Everything a CLI run can need, from one JSON document. Sections are
/// optional and default-constructed when absent; see README for the schema.
struct AppConfig {
  pipeline::LocalizerConfig localizer;
  std::optional<scene_sim::SceneConfig> scene;
  pipeline::SweepParams sweep{pipeline::default_sweep_distances(), 20};
  vehicle::DriveGeometry drive;
  pipeline::TrackingParams tracking;
};

/// Parses a full config document. base_dir resolves relative excitation file
/// paths. Throws ConfigError naming the offending field.
AppConfig app_config_from_json(const std::string& text, const std::string& base_dir = "");

/// Parses just a scene section ({"sources": [...], ...}).
scene_sim::SceneConfig scene_from_json(const std::string& text, const std::string& base_dir = "");

/// Serializes the effective configuration (after overrides) back to JSON.
std::string effective_config_json(const AppConfig& config);

}  // namespace srploc::config_json
