#pragma once

#include <complex>
#include <vector>

namespace srploc::fft {

/// One-sided real-to-complex DFT; returns n/2 + 1 bins. Unit-amplitude
/// convention (no scaling on the forward transform).
std::vector<std::complex<double>> rfft(const std::vector<double>& input);

/// Inverse of rfft for an original length n (bins.size() == n/2 + 1);
/// output is scaled by 1/n so irfft(rfft(x)) == x.
std::vector<double> irfft(const std::vector<std::complex<double>>& bins, std::size_t n);

}  // namespace srploc::fft
