#include "srploc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "srploc/errors.hpp"

namespace srploc::fft {

namespace {

// FFTW plan creation is not thread-safe; execution of distinct plans is.
// Plans are cached per transform size for the life of the process.
std::mutex g_plan_mutex;

struct RealPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  double* real = nullptr;          // length n
  fftw_complex* spec = nullptr;    // length n/2 + 1

  RealPlans() = default;
  RealPlans(const RealPlans&) = delete;
  RealPlans& operator=(const RealPlans&) = delete;
  ~RealPlans() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
    fftw_free(real);
    fftw_free(spec);
  }
};

struct PlanCache {
  std::map<std::size_t, RealPlans> plans;
  ~PlanCache() {
    plans.clear();
    fftw_cleanup();
  }
};

RealPlans& plans_for(std::size_t n) {
  static PlanCache cache;
  auto [it, inserted] = cache.plans.try_emplace(n);
  RealPlans& p = it->second;
  if (inserted) {
    p.real = fftw_alloc_real(n);
    p.spec = fftw_alloc_complex(n / 2 + 1);
    p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), p.real, p.spec, FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), p.spec, p.real, FFTW_ESTIMATE);
  }
  return p;
}

}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& input) {
  const std::size_t n = input.size();
  if (n == 0) throw InvalidArgument("rfft: empty input");
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  RealPlans& p = plans_for(n);
  std::memcpy(p.real, input.data(), n * sizeof(double));
  fftw_execute(p.forward);
  const std::size_t bins = n / 2 + 1;
  std::vector<std::complex<double>> out(bins);
  for (std::size_t k = 0; k < bins; ++k) out[k] = {p.spec[k][0], p.spec[k][1]};
  return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& bins, std::size_t n) {
  if (n == 0 || bins.size() != n / 2 + 1)
    throw InvalidArgument("irfft: bin count must be n/2 + 1");
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  RealPlans& p = plans_for(n);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    p.spec[k][0] = bins[k].real();
    p.spec[k][1] = bins[k].imag();
  }
  fftw_execute(p.inverse);
  std::vector<double> out(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p.real[i] * scale;
  return out;
}

}  // namespace srploc::fft
