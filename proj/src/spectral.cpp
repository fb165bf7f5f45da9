#include "srploc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "srploc/fft.hpp"

namespace srploc::spectral {

namespace {

void check_frame(const SignalFrame& f, const char* name) {
  if (f.samples.empty()) throw InvalidArgument(std::string(name) + ": empty frame");
  if (!(f.sample_rate > 0.0)) throw InvalidArgument(std::string(name) + ": sample_rate must be > 0");
  for (double s : f.samples)
    if (!std::isfinite(s)) throw InvalidArgument(std::string(name) + ": non-finite sample");
}

void check_compatible(const SignalFrame& x1, const SignalFrame& x2) {
  check_frame(x1, "x1");
  check_frame(x2, "x2");
  if (x1.samples.size() != x2.samples.size())
    throw InvalidArgument("frames must have equal length");
  if (x1.sample_rate != x2.sample_rate)
    throw InvalidArgument("frames must have equal sample rate");
}

enum class Weighting { none, phat };

// Shared frequency-domain route. The cross spectrum is conj(X1) * X2 so that
// the inverse transform reproduces R[k] = sum_n x1[n] x2[n+k] exactly
// (delayed x2 peaks at a positive lag, matching xcorr_time).
CorrelationFunction correlate_freq(const SignalFrame& x1, const SignalFrame& x2,
                                   Weighting weighting, double regularization) {
  check_compatible(x1, x2);
  if (regularization < 0.0 || !std::isfinite(regularization))
    throw InvalidArgument("regularization must be >= 0");

  const std::size_t len = x1.samples.size();
  const std::size_t padded = 2 * len;

  std::vector<double> a(padded, 0.0), b(padded, 0.0);
  std::copy(x1.samples.begin(), x1.samples.end(), a.begin());
  std::copy(x2.samples.begin(), x2.samples.end(), b.begin());

  auto spec_a = fft::rfft(a);
  auto spec_b = fft::rfft(b);

  std::vector<std::complex<double>> cross(spec_a.size());
  for (std::size_t k = 0; k < cross.size(); ++k)
    cross[k] = std::conj(spec_a[k]) * spec_b[k];

  if (weighting == Weighting::phat) {
    double max_mag = 0.0;
    for (const auto& c : cross) max_mag = std::max(max_mag, std::abs(c));
    const double eps = regularization * max_mag;
    for (auto& c : cross) {
      const double denom = std::abs(c) + eps;
      c = denom > 0.0 ? c / denom : std::complex<double>(0.0, 0.0);
    }
  }

  const auto circular = fft::irfft(cross, padded);

  // Circular index m maps to lag m for m <= L-1 and to lag m - 2L for the
  // tail; reorder into [-(L-1), L-1].
  CorrelationFunction corr;
  corr.sample_rate = x1.sample_rate;
  corr.values.resize(2 * len - 1);
  const int lmax = static_cast<int>(len) - 1;
  for (int lag = -lmax; lag <= lmax; ++lag) {
    const std::size_t m = lag >= 0 ? static_cast<std::size_t>(lag)
                                   : padded + static_cast<std::size_t>(lag);
    corr.values[static_cast<std::size_t>(lag + lmax)] = circular[m];
  }
  return corr;
}

}  // namespace

double CorrelationFunction::at_lag(int lag) const {
  const int lmax = max_lag();
  if (lag < -lmax || lag > lmax) throw OutOfRange("lag outside correlation support");
  return values[static_cast<std::size_t>(lag + lmax)];
}

Spectrum rfft(const SignalFrame& frame) {
  check_frame(frame, "frame");
  return Spectrum{fft::rfft(frame.samples), frame.samples.size(), frame.sample_rate};
}

CorrelationFunction xcorr_time(const SignalFrame& x1, const SignalFrame& x2) {
  check_compatible(x1, x2);
  const int len = static_cast<int>(x1.samples.size());
  CorrelationFunction corr;
  corr.sample_rate = x1.sample_rate;
  corr.values.assign(static_cast<std::size_t>(2 * len - 1), 0.0);
  for (int lag = -(len - 1); lag <= len - 1; ++lag) {
    double acc = 0.0;
    for (int n = 0; n < len; ++n) {
      const int m = n + lag;
      if (m >= 0 && m < len) acc += x1.samples[n] * x2.samples[m];
    }
    corr.values[static_cast<std::size_t>(lag + len - 1)] = acc;
  }
  return corr;
}

double tdoa_from_correlation(const CorrelationFunction& corr) {
  if (corr.values.empty()) throw InvalidArgument("empty correlation");
  if (!(corr.sample_rate > 0.0)) throw InvalidArgument("correlation sample_rate must be > 0");
  const auto [lo, hi] = std::minmax_element(corr.values.begin(), corr.values.end());
  if (*lo == *hi) throw AmbiguousPeak("correlation has no unique peak (all values equal)");

  const int lmax = corr.max_lag();
  int best_lag = -lmax - 1;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < corr.values.size(); ++i) {
    const int lag = static_cast<int>(i) - lmax;
    const double v = corr.values[i];
    const bool better =
        v > best || (v == best && (std::abs(lag) < std::abs(best_lag) ||
                                   (std::abs(lag) == std::abs(best_lag) && lag < best_lag)));
    if (better) {
      best = v;
      best_lag = lag;
    }
  }
  return static_cast<double>(best_lag) / corr.sample_rate;
}

CorrelationFunction gcc_phat(const SignalFrame& x1, const SignalFrame& x2,
                             double regularization) {
  return correlate_freq(x1, x2, Weighting::phat, regularization);
}

CorrelationFunction xcorr_freq(const SignalFrame& x1, const SignalFrame& x2) {
  return correlate_freq(x1, x2, Weighting::none, 0.0);
}

double interpolate_correlation(const CorrelationFunction& corr, double lag) {
  const int lmax = corr.max_lag();
  if (!(lag >= -lmax && lag <= lmax))
    throw OutOfRange("fractional lag outside [-(L-1), L-1]");
  const double floor_lag = std::floor(lag);
  const int i0 = static_cast<int>(floor_lag);
  const double frac = lag - floor_lag;
  if (i0 == lmax) return corr.at_lag(lmax);
  const double v0 = corr.values[static_cast<std::size_t>(i0 + lmax)];
  const double v1 = corr.values[static_cast<std::size_t>(i0 + 1 + lmax)];
  return v0 + frac * (v1 - v0);
}

std::vector<std::vector<SignalFrame>> frame_stream(
    const std::vector<std::vector<double>>& channels, double sample_rate,
    std::size_t frame_length, std::size_t hop, Window window) {
  if (channels.empty()) throw InvalidArgument("frame_stream: no channels");
  if (frame_length < 2) throw InvalidArgument("frame_stream: frame_length must be >= 2");
  if (hop == 0 || hop > frame_length)
    throw InvalidArgument("frame_stream: hop must be in (0, frame_length]");
  if (!(sample_rate > 0.0)) throw InvalidArgument("frame_stream: sample_rate must be > 0");
  const std::size_t n = channels.front().size();
  for (const auto& ch : channels)
    if (ch.size() != n) throw InvalidArgument("frame_stream: channels differ in length");

  std::vector<double> taper(frame_length, 1.0);
  if (window == Window::hann) {
    for (std::size_t i = 0; i < frame_length; ++i)
      taper[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(frame_length));
  }

  std::vector<std::vector<SignalFrame>> frames;
  if (n < frame_length) return frames;
  const std::size_t count = (n - frame_length) / hop + 1;
  frames.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t start = f * hop;
    std::vector<SignalFrame> per_channel;
    per_channel.reserve(channels.size());
    for (const auto& ch : channels) {
      SignalFrame frame;
      frame.sample_rate = sample_rate;
      frame.samples.resize(frame_length);
      for (std::size_t i = 0; i < frame_length; ++i)
        frame.samples[i] = ch[start + i] * taper[i];
      per_channel.push_back(std::move(frame));
    }
    frames.push_back(std::move(per_channel));
  }
  return frames;
}

}  // namespace srploc::spectral
