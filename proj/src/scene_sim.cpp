#include "srploc/scene_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "srploc/errors.hpp"

namespace srploc::scene_sim {

using geometry::Vec3;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSincHalfTaps = 15;  // 31-tap interpolator
constexpr double kKaiserBeta = 8.6;

// Box-Muller on top of mt19937_64. std::normal_distribution is
// implementation-defined, which would break bit-reproducibility of scenes.
class GaussianSource {
 public:
  explicit GaussianSource(std::mt19937_64& rng) : rng_(rng) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // uniform in (0, 1]; log(0) guarded by the +1 offset
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64& rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

double sinc(double t) {
  if (std::abs(t) < 1e-12) return 1.0;
  return std::sin(kPi * t) / (kPi * t);
}

double kaiser(double t, double half_width) {
  const double x = t / half_width;
  if (std::abs(x) > 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - x * x)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

// y[n] = sum_k e[k] * h(n - delay - k) with h a Kaiser-windowed sinc. The
// fractional part of the delay is fixed per channel, so h collapses to one
// FIR kernel: y[n] = sum_j taps[j] * e[n - floor(delay) - j].
void add_delayed(const std::vector<double>& excitation, double delay_samples, double gain,
                 std::vector<double>& out) {
  const double floor_delay = std::floor(delay_samples);
  const int int_delay = static_cast<int>(floor_delay);
  const double frac = delay_samples - floor_delay;

  std::array<double, 2 * kSincHalfTaps + 2> taps{};
  for (int j = -kSincHalfTaps; j <= kSincHalfTaps + 1; ++j) {
    const double t = static_cast<double>(j) - frac;
    taps[j + kSincHalfTaps] = sinc(t) * kaiser(t, kSincHalfTaps);
  }

  const int len = static_cast<int>(excitation.size());
  for (int n = 0; n < static_cast<int>(out.size()); ++n) {
    const int j_lo = std::max(-kSincHalfTaps, n - int_delay - (len - 1));
    const int j_hi = std::min(kSincHalfTaps + 1, n - int_delay);
    double acc = 0.0;
    for (int j = j_lo; j <= j_hi; ++j)
      acc += taps[j + kSincHalfTaps] * excitation[n - int_delay - j];
    out[n] += gain * acc;
  }
}

double rms(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

// Linear-phase FIR bandpass, 300-3400 Hz, for the speech-band excitation.
std::vector<double> speech_bandpass(const std::vector<double>& x, double sample_rate) {
  constexpr int kHalf = 50;  // 101 taps
  const double f_lo = 300.0 / sample_rate;
  const double f_hi = std::min(3400.0 / sample_rate, 0.499);
  std::vector<double> taps(2 * kHalf + 1);
  for (int i = -kHalf; i <= kHalf; ++i) {
    const double ideal = 2.0 * f_hi * sinc(2.0 * f_hi * i) - 2.0 * f_lo * sinc(2.0 * f_lo * i);
    const double w = 0.54 + 0.46 * std::cos(kPi * i / kHalf);  // Hamming
    taps[i + kHalf] = ideal * w;
  }
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (int i = -kHalf; i <= kHalf; ++i) {
      const auto k = static_cast<long>(n) + i;
      if (k >= 0 && k < static_cast<long>(x.size())) acc += x[k] * taps[i + kHalf];
    }
    y[n] = acc;
  }
  return y;
}

std::vector<double> make_excitation(const SourceSpec& source, std::size_t samples,
                                    double sample_rate, GaussianSource& noise) {
  std::vector<double> e(samples);
  switch (source.excitation) {
    case Excitation::white_noise:
      for (auto& v : e) v = noise.next();
      break;
    case Excitation::speech_noise: {
      for (auto& v : e) v = noise.next();
      e = speech_bandpass(e, sample_rate);
      break;
    }
    case Excitation::file_samples: {
      if (source.samples.empty())
        throw InvalidArgument("file-backed source has no samples");
      for (std::size_t n = 0; n < samples; ++n) e[n] = source.samples[n % source.samples.size()];
      break;
    }
  }
  const double r = rms(e);
  if (r > 0.0)
    for (auto& v : e) v *= source.level / r;
  return e;
}

void validate(const SceneConfig& config, const geometry::MicArray& array) {
  if (config.sources.empty()) throw InvalidArgument("scene needs at least one source");
  if (!(config.duration > 0.0)) throw InvalidArgument("scene duration must be > 0");
  if (!(config.sample_rate > 0.0)) throw InvalidArgument("scene sample_rate must be > 0");
  if (config.noise_rms < 0.0 || !std::isfinite(config.noise_rms))
    throw InvalidArgument("noise_rms must be >= 0");
  const double circumradius = array.circumradius();
  for (const auto& s : config.sources) {
    if (!(s.level > 0.0)) throw InvalidArgument("source level must be > 0");
    if (!(s.range > circumradius))
      throw InvalidArgument("source range must exceed the array circumradius");
  }
}

}  // namespace

Vec3 source_position(const SourceSpec& source) {
  return source.range * geometry::direction_from_angles(source.azimuth, source.elevation);
}

double noise_rms_for_snr(const SourceSpec& source, double snr_db) {
  return (source.level / source.range) / std::pow(10.0, snr_db / 20.0);
}

AudioBuffer synthesize(const SceneConfig& config, const geometry::MicArray& array) {
  validate(config, array);
  const auto samples = static_cast<std::size_t>(std::llround(config.duration * config.sample_rate));
  if (samples == 0) throw InvalidArgument("scene duration is shorter than one sample");
  const std::size_t mics = array.mics.size();

  std::mt19937_64 rng(config.seed);
  GaussianSource noise(rng);

  AudioBuffer audio;
  audio.sample_rate = config.sample_rate;
  audio.channels.assign(mics, std::vector<double>(samples, 0.0));

  for (const auto& source : config.sources) {
    const auto excitation = make_excitation(source, samples, config.sample_rate, noise);
    const Vec3 pos = source_position(source);
    for (std::size_t m = 0; m < mics; ++m) {
      const double distance = geometry::norm(pos - array.mics[m]);
      const double delay = distance / array.speed_of_sound * config.sample_rate;
      add_delayed(excitation, delay, 1.0 / distance, audio.channels[m]);
    }
  }

  if (config.noise_rms > 0.0) {
    for (auto& channel : audio.channels)
      for (auto& v : channel) v += config.noise_rms * noise.next();
  }
  return audio;
}

std::vector<double> ground_truth_tdoas(const SceneConfig& config, const geometry::MicArray& array) {
  if (config.sources.size() != 1)
    throw InvalidArgument("ground_truth_tdoas requires a single-source scene");
  validate(config, array);
  const Vec3 pos = source_position(config.sources.front());
  std::vector<double> tdoas;
  for (const auto& pair : geometry::enumerate_pairs(array))
    tdoas.push_back(geometry::point_delay_difference(pos, pair, array));
  return tdoas;
}

}  // namespace srploc::scene_sim
