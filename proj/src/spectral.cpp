#include "swingid/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "swingid/errors.hpp"

namespace swingid {

double FrfResult::gain_db(std::size_t bin) const {
  return 20.0 * std::log10(std::abs(h.at(bin)));
}

namespace {

// FFTW planning is not thread-safe; execution on separate buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct FftwPlan {
  fftw_plan plan = nullptr;
  double* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t n = 0;

  explicit FftwPlan(std::size_t size) : n(size) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    in = fftw_alloc_real(n);
    out = fftw_alloc_complex(n / 2 + 1);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
};

}  // namespace

FrfResult frf_welch(const std::vector<double>& input,
                    const std::vector<double>& output, double fs,
                    std::size_t window, std::size_t overlap) {
  if (input.size() != output.size())
    throw ValidationError("frf: input and output must be the same length");
  if (!(fs > 0.0)) throw ValidationError("frf: fs must be positive");
  if (window < 16) throw ValidationError("frf: window too small");
  if (overlap >= window) throw ValidationError("frf: overlap must be < window");

  const std::size_t hop = window - overlap;
  if (input.size() < window + hop)
    throw ValidationError("frf: need at least two full segments");
  const std::size_t n_seg = 1 + (input.size() - window) / hop;
  const std::size_t n_bin = window / 2 + 1;

  std::vector<double> hann(window);
  for (std::size_t i = 0; i < window; ++i)
    hann[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                    static_cast<double>(window - 1)));

  std::vector<double> sxx(n_bin, 0.0), syy(n_bin, 0.0);
  std::vector<std::complex<double>> sxy(n_bin, 0.0);

  FftwPlan fft(window);
  std::vector<std::complex<double>> xf(n_bin), yf(n_bin);
  for (std::size_t s = 0; s < n_seg; ++s) {
    const std::size_t base = s * hop;
    for (std::size_t i = 0; i < window; ++i) fft.in[i] = hann[i] * input[base + i];
    fftw_execute(fft.plan);
    for (std::size_t b = 0; b < n_bin; ++b)
      xf[b] = {fft.out[b][0], fft.out[b][1]};
    for (std::size_t i = 0; i < window; ++i) fft.in[i] = hann[i] * output[base + i];
    fftw_execute(fft.plan);
    for (std::size_t b = 0; b < n_bin; ++b)
      yf[b] = {fft.out[b][0], fft.out[b][1]};

    for (std::size_t b = 0; b < n_bin; ++b) {
      sxx[b] += std::norm(xf[b]);
      syy[b] += std::norm(yf[b]);
      sxy[b] += std::conj(xf[b]) * yf[b];
    }
  }

  double sxx_peak = 0.0;
  for (double v : sxx) sxx_peak = std::max(sxx_peak, v);
  if (!(sxx_peak > 0.0)) throw AnalysisError("frf: input power is zero");
  const double sxx_floor = 1e-12 * sxx_peak;

  FrfResult r;
  r.segments = n_seg;
  r.freq.resize(n_bin);
  r.h.resize(n_bin);
  r.coherence.resize(n_bin);
  for (std::size_t b = 0; b < n_bin; ++b) {
    r.freq[b] = fs * static_cast<double>(b) / static_cast<double>(window);
    if (sxx[b] > sxx_floor) {
      r.h[b] = sxy[b] / sxx[b];
      const double denom = sxx[b] * syy[b];
      r.coherence[b] = denom > 0.0 ? std::norm(sxy[b]) / denom : 0.0;
    } else {
      r.h[b] = 0.0;
      r.coherence[b] = 0.0;
    }
  }

  // reference gain from the lowest excited bins above DC
  double gain_sum = 0.0;
  int gain_count = 0;
  for (std::size_t b = 1; b < n_bin && gain_count < 3; ++b) {
    if (sxx[b] <= sxx_floor) continue;
    gain_sum += std::abs(r.h[b]);
    ++gain_count;
  }
  if (gain_count == 0) throw AnalysisError("frf: no excited bins above DC");
  r.low_freq_gain = gain_sum / gain_count;

  const double threshold = r.low_freq_gain / std::sqrt(2.0);
  r.bandwidth_hz = std::numeric_limits<double>::quiet_NaN();
  double prev_mag = r.low_freq_gain, prev_freq = 0.0;
  for (std::size_t b = 1; b < n_bin; ++b) {
    if (sxx[b] <= sxx_floor) continue;
    const double mag = std::abs(r.h[b]);
    if (mag < threshold) {
      const double span = mag - prev_mag;
      const double frac = span != 0.0 ? (threshold - prev_mag) / span : 1.0;
      r.bandwidth_hz = prev_freq + frac * (r.freq[b] - prev_freq);
      break;
    }
    prev_mag = mag;
    prev_freq = r.freq[b];
  }
  return r;
}

}  // namespace swingid
