#pragma once

#include <cstdint>
#include <vector>

#include "srploc/audio_buffer.hpp"
#include "srploc/geometry.hpp"

namespace srploc::scene_sim {

enum class Excitation { white_noise, speech_noise, file_samples };

/// One point source, parameterized the way the experiments are: direction,
/// range and RMS level (the excitation is normalized to unit RMS, so the
/// per-channel contribution has RMS ~ level / range).
struct SourceSpec {
  double azimuth = 0.0;    // degrees
  double elevation = 0.0;  // degrees
  double range = 1.5;      // meters from the array center
  double level = 1.0;      // RMS amplitude at 1 m
  Excitation excitation = Excitation::white_noise;
  std::vector<double> samples;  // excitation when file_samples
};

struct SceneConfig {
  std::vector<SourceSpec> sources;
  double noise_rms = 0.0;  // per-channel additive white noise
  double duration = 1.0;   // seconds
  double sample_rate = 16000.0;
  std::uint64_t seed = 0;  // fixes all randomness
};

geometry::Vec3 source_position(const SourceSpec& source);

/// Sensor noise level that puts a single source at the requested SNR
/// (per-channel signal RMS is level / range).
double noise_rms_for_snr(const SourceSpec& source, double snr_db);

/// Free-field synthesis: each source's excitation is delayed per microphone
/// by the exact propagation time (band-limited 31-tap Kaiser-sinc fractional
/// delay), attenuated by 1/distance, summed, then independent white noise at
/// noise_rms is added per channel. Deterministic given the seed.
AudioBuffer synthesize(const SceneConfig& config, const geometry::MicArray& array);

/// Exact per-pair delay differences (seconds) at the source position, in
/// enumerate_pairs order. Single-source configs only.
std::vector<double> ground_truth_tdoas(const SceneConfig& config, const geometry::MicArray& array);

}  // namespace srploc::scene_sim
