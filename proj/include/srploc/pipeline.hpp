#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "srploc/audio_buffer.hpp"
#include "srploc/geometry.hpp"
#include "srploc/scene_sim.hpp"
#include "srploc/spectral.hpp"
#include "srploc/srp_grid.hpp"
#include "srploc/vehicle.hpp"

namespace srploc::pipeline {

struct GridParams {
  double radius = 1.5;          // meters
  double azimuth_step = 2.0;    // degrees
  double elevation_step = 2.0;  // degrees
};

struct FrameParams {
  std::size_t length = 1024;
  std::size_t hop = 512;
  spectral::Window window = spectral::Window::hann;
};

struct LocalizerConfig {
  geometry::MicArray array = geometry::cubical_array(0.15);
  GridParams grid;
  FrameParams frames;
  double regularization = spectral::kDefaultPhatRegularization;
  int max_sources = 3;
  double suppression_radius = 20.0;  // degrees
  /// Frames whose per-channel RMS all fall below this fraction of full scale
  /// are skipped; if every frame does, localize raises NoSignal.
  double energy_floor = 1e-6;
  /// Keep the accumulated SRP map in the result (for --dump-srp).
  bool keep_srp_map = false;
};

/// Rejects invalid configurations with a ConfigError naming the field.
/// sample_rate-dependent checks (delay-table coverage) happen when the
/// Localizer is built.
void validate(const LocalizerConfig& config);

struct LocalizationResult {
  std::vector<srp_grid::DoaEstimate> estimates;  // descending power
  std::optional<srp_grid::SrpMap> srp_map;
  long frames_used = 0;
  double elapsed = 0.0;  // seconds
};

/// Reusable localization state: grid, pairs and delay table precomputed for
/// one config + sample rate. run() is const and deterministic.
class Localizer {
 public:
  Localizer(LocalizerConfig config, double sample_rate);

  LocalizationResult run(const AudioBuffer& audio) const;

  const LocalizerConfig& config() const { return config_; }
  const srp_grid::SphericalGrid& grid() const { return grid_; }
  const std::vector<geometry::MicPair>& pairs() const { return pairs_; }
  const srp_grid::DelayTable& delay_table() const { return table_; }
  double sample_rate() const { return sample_rate_; }

 private:
  LocalizerConfig config_;
  double sample_rate_;
  srp_grid::SphericalGrid grid_;
  std::vector<geometry::MicPair> pairs_;
  srp_grid::DelayTable table_;
};

/// Frame, correlate per pair (GCC-PHAT), accumulate SRP over all frames,
/// extract peaks. Channel count must match the configured array.
LocalizationResult localize(const AudioBuffer& audio, const LocalizerConfig& config);

struct TrackingParams {
  double duration = 10.0;      // simulated seconds
  double control_rate = 4.0;   // control cycles per second
  double audio_window = 0.5;   // seconds of audio per cycle
  double stop_range = 0.5;     // stop once this close to a source, meters
  vehicle::ControllerParams controller;
};

/// Measurement callback for the closed loop: body-frame azimuth error in
/// radians, or nullopt for a no-signal cycle (commands zero twist).
using AzimuthMeasurement =
    std::function<std::optional<double>(const vehicle::VehicleState&, double t)>;
using StopPredicate = std::function<bool(const vehicle::VehicleState&)>;

/// Generic steer-toward-azimuth loop; one TrajectorySample per cycle. Used
/// by track_and_drive with the DSP measurement and by tests with a perfect
/// one.
std::vector<vehicle::TrajectorySample> run_heading_loop(
    const AzimuthMeasurement& measure, const vehicle::DriveGeometry& drive,
    const vehicle::ControllerParams& controller, double duration, double dt,
    const StopPredicate& stop = {});

/// Closed loop per the flowchart: each cycle re-synthesizes a sliding window
/// of audio from the vehicle's current pose (sources fixed in the world
/// frame), localizes, and steers toward the strongest estimate's azimuth.
std::vector<vehicle::TrajectorySample> track_and_drive(const scene_sim::SceneConfig& scene,
                                                       const LocalizerConfig& localizer,
                                                       const vehicle::DriveGeometry& drive,
                                                       const TrackingParams& params);

struct SweepParams {
  std::vector<double> distances;  // meters, ascending
  int trials = 20;
};

/// Default sweep: 0.5 m to 3.0 m in 0.1 m steps.
std::vector<double> default_sweep_distances();

struct SweepRow {
  double distance = 0.0;  // meters
  double mse_deg2 = 0.0;  // mean squared azimuth error
};

/// Re-runs the base scene's (single) source at each distance, `trials`
/// reseeded scenes per distance, and reports the mean squared azimuth error.
/// Failed localizations count as maximum-error (180 deg) trials.
std::vector<SweepRow> run_distance_sweep(const scene_sim::SceneConfig& base_scene,
                                         const SweepParams& params,
                                         const LocalizerConfig& localizer);

/// CSV export matching the distance/MSE axes: header distance_cm,mse_deg2.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace srploc::pipeline
