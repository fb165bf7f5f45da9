#pragma once

#include <complex>
#include <vector>

#include "srploc/errors.hpp"

namespace srploc::spectral {

enum class Window { rectangular, hann };

/// One channel's worth of framed samples (dimensionless amplitude).
struct SignalFrame {
  std::vector<double> samples;
  double sample_rate = 0.0;  // Hz
};

/// One-sided spectrum of a real frame: frame_length/2 + 1 bins.
struct Spectrum {
  std::vector<std::complex<double>> bins;
  std::size_t frame_length = 0;
  double sample_rate = 0.0;
};

/// Cross-correlation values over integer lags [-(L-1), L-1] for frame
/// length L. values[i] holds the lag i - (L-1). A peak at positive lag s
/// means the second signal is the first delayed by s samples.
struct CorrelationFunction {
  std::vector<double> values;
  double sample_rate = 0.0;

  std::size_t frame_length() const { return (values.size() + 1) / 2; }
  int max_lag() const { return static_cast<int>(frame_length()) - 1; }
  double at_lag(int lag) const;
};

Spectrum rfft(const SignalFrame& frame);

/// Brute-force cross-correlation: R[k] = sum_n x1[n] * x2[n+k], zero outside
/// the overlap, evaluated directly over all lags. Quadratic in frame length;
/// this is the reference the frequency-domain path is checked against.
CorrelationFunction xcorr_time(const SignalFrame& x1, const SignalFrame& x2);

/// Lag of the global maximum divided by the sample rate. Ties break toward
/// the smallest |lag| (then toward the negative lag). Throws AmbiguousPeak
/// when every value is equal.
double tdoa_from_correlation(const CorrelationFunction& corr);

/// Relative regularization applied to the PHAT denominator:
/// each bin is divided by (|X1 conj(X2)| + regularization * max_bin_magnitude).
constexpr double kDefaultPhatRegularization = 1e-12;

/// GCC-PHAT: zero-pad both frames to 2L, transform, whiten the cross-power
/// spectrum to unit magnitude per bin, inverse-transform, reorder to lags
/// [-(L-1), L-1]. Same lag convention as xcorr_time.
CorrelationFunction gcc_phat(const SignalFrame& x1, const SignalFrame& x2,
                             double regularization = kDefaultPhatRegularization);

/// Frequency-domain correlation with the PHAT weighting disabled (divide by
/// 1 instead of the magnitude). Equals xcorr_time up to rounding.
CorrelationFunction xcorr_freq(const SignalFrame& x1, const SignalFrame& x2);

/// Linear interpolation of the correlation at a fractional lag within
/// [-(L-1), L-1].
double interpolate_correlation(const CorrelationFunction& corr, double lag);

/// Windowed, hop-advanced framing of a multichannel signal. Returns one
/// entry per frame position, each holding one SignalFrame per channel.
/// A trailing partial frame is discarded; fewer samples than one frame
/// yields an empty result.
std::vector<std::vector<SignalFrame>> frame_stream(
    const std::vector<std::vector<double>>& channels, double sample_rate,
    std::size_t frame_length, std::size_t hop, Window window = Window::hann);

}  // namespace srploc::spectral
