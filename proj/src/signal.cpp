#include "swingid/signal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "swingid/errors.hpp"

namespace swingid {

FilterCoeffs butter_lowpass(int order, double cutoff_hz, double fs) {
  if (order < 1) throw ValidationError("butter_lowpass: order must be >= 1");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0))
    throw ValidationError("butter_lowpass: cutoff must lie in (0, fs/2)");

  // Analog prototype poles on the unit circle, scaled by the prewarped cutoff.
  const double warped = 2.0 * fs * std::tan(M_PI * cutoff_hz / fs);
  std::vector<std::complex<double>> zpoles(order);
  for (int k = 0; k < order; ++k) {
    const double theta = M_PI * (2.0 * k + 1.0) / (2.0 * order) + M_PI / 2.0;
    std::complex<double> s = warped * std::complex<double>(std::cos(theta), std::sin(theta));
    // bilinear transform: z = (2 fs + s) / (2 fs - s)
    zpoles[k] = (2.0 * fs + s) / (2.0 * fs - s);
  }

  // Denominator polynomial from the digital poles.
  std::vector<std::complex<double>> a{1.0};
  for (const auto& p : zpoles) {
    std::vector<std::complex<double>> next(a.size() + 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      next[i] += a[i];
      next[i + 1] -= a[i] * p;
    }
    a = std::move(next);
  }

  // All zeros at z = -1: numerator = (1 + z^-1)^order, scaled for unit DC gain.
  std::vector<double> b(static_cast<std::size_t>(order) + 1, 0.0);
  b[0] = 1.0;
  for (int stage = 0; stage < order; ++stage)
    for (int i = stage + 1; i >= 1; --i) b[i] += b[i - 1];

  FilterCoeffs fc;
  fc.a.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) fc.a[i] = a[i].real();
  double asum = std::accumulate(fc.a.begin(), fc.a.end(), 0.0);
  double bsum = std::accumulate(b.begin(), b.end(), 0.0);
  fc.b.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) fc.b[i] = b[i] * asum / bsum;
  return fc;
}

namespace {

// Steady-state internal state of the direct-form-II-transposed filter for a
// unit step input; scaling it by the first sample suppresses edge transients.
std::vector<double> step_state(const FilterCoeffs& fc) {
  const std::size_t n = fc.a.size() - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  // m = I - A^T where A is the companion matrix of a
  for (std::size_t i = 0; i < n; ++i) m(i, 0) += fc.a[i + 1];
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) -= 1.0;
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(i) = fc.b[i + 1] - fc.a[i + 1] * fc.b[0];
  Eigen::VectorXd zi = m.partialPivLu().solve(rhs);
  return {zi.data(), zi.data() + n};
}

std::vector<double> run_filter(const FilterCoeffs& fc, const std::vector<double>& x,
                               const std::vector<double>& zi) {
  const std::size_t n = fc.a.size() - 1;
  std::vector<double> z = zi;
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const double yi = fc.b[0] * xi + z[0];
    for (std::size_t k = 0; k + 1 < n; ++k)
      z[k] = fc.b[k + 1] * xi + z[k + 1] - fc.a[k + 1] * yi;
    z[n - 1] = fc.b[n] * xi - fc.a[n] * yi;
    y[i] = yi;
  }
  return y;
}

}  // namespace

std::vector<double> lfilter(const FilterCoeffs& fc, const std::vector<double>& x,
                            double ic_scale) {
  std::vector<double> zi = step_state(fc);
  for (double& z : zi) z *= ic_scale;
  return run_filter(fc, x, zi);
}

std::vector<double> filtfilt(const FilterCoeffs& fc, const std::vector<double>& x) {
  const std::size_t ntaps = std::max(fc.a.size(), fc.b.size());
  const std::size_t padlen = 3 * ntaps;
  if (x.size() <= padlen)
    throw ValidationError("filtfilt: input too short (" + std::to_string(x.size()) +
                          " samples, need > " + std::to_string(padlen) + ")");

  // odd reflection about the end samples
  std::vector<double> ext;
  ext.reserve(x.size() + 2 * padlen);
  for (std::size_t i = padlen; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 2; i <= padlen + 1; ++i)
    ext.push_back(2.0 * x.back() - x[x.size() - i]);

  std::vector<double> y = lfilter(fc, ext, ext.front());
  std::reverse(y.begin(), y.end());
  y = lfilter(fc, y, y.front());
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(padlen),
          y.begin() + static_cast<std::ptrdiff_t>(padlen + x.size())};
}

std::vector<double> lowpass_zero_phase(const std::vector<double>& x, double cutoff_hz,
                                       double fs, int order) {
  if (cutoff_hz <= 0.0) return x;
  return filtfilt(butter_lowpass(order, cutoff_hz, fs), x);
}

std::vector<double> central_diff(const std::vector<double>& x, double dt) {
  const std::size_t n = x.size();
  if (n < 3) throw ValidationError("central_diff: need at least 3 samples");
  std::vector<double> d(n);
  d[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) / (2.0 * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
  d[n - 1] = (3.0 * x[n - 1] - 4.0 * x[n - 2] + x[n - 3]) / (2.0 * dt);
  return d;
}

std::vector<double> central_diff2(const std::vector<double>& x, double dt) {
  const std::size_t n = x.size();
  if (n < 4) throw ValidationError("central_diff2: need at least 4 samples");
  const double dt2 = dt * dt;
  std::vector<double> d(n);
  d[0] = (2.0 * x[0] - 5.0 * x[1] + 4.0 * x[2] - x[3]) / dt2;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / dt2;
  d[n - 1] = (2.0 * x[n - 1] - 5.0 * x[n - 2] + 4.0 * x[n - 3] - x[n - 4]) / dt2;
  return d;
}

UniformSeries::UniformSeries(double t0, double dt, std::vector<double> values, Kind kind)
    : t0_(t0), dt_(dt), y_(std::move(values)), kind_(kind) {
  if (y_.size() < 2) throw ValidationError("UniformSeries: need at least 2 samples");
  if (!(dt_ > 0.0)) throw ValidationError("UniformSeries: dt must be positive");
  if (kind_ == Kind::Cubic) {
    slope_ = central_diff(y_, dt_);
  }
}

double UniformSeries::operator()(double t) const {
  const std::size_t n = y_.size();
  double u = (t - t0_) / dt_;
  if (u <= 0.0) return y_.front();
  if (u >= static_cast<double>(n - 1)) return y_.back();
  std::size_t i = static_cast<std::size_t>(u);
  if (i >= n - 1) i = n - 2;
  const double s = u - static_cast<double>(i);
  if (kind_ == Kind::Linear) return y_[i] + s * (y_[i + 1] - y_[i]);
  // cubic Hermite on [i, i+1]
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * y_[i] + h10 * dt_ * slope_[i] + h01 * y_[i + 1] + h11 * dt_ * slope_[i + 1];
}

std::vector<double> resample_uniform(const std::vector<double>& y, std::size_t n_out) {
  if (n_out < 2) throw ValidationError("resample_uniform: need at least 2 output points");
  UniformSeries s(0.0, 1.0, y, UniformSeries::Kind::Cubic);
  const double span = static_cast<double>(y.size() - 1);
  std::vector<double> out(n_out);
  for (std::size_t i = 0; i < n_out; ++i)
    out[i] = s(span * static_cast<double>(i) / static_cast<double>(n_out - 1));
  return out;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1));
  return w;
}

double quantile(std::vector<double> data, double q) {
  if (data.empty()) throw ValidationError("quantile: empty data");
  std::sort(data.begin(), data.end());
  const double pos = q * static_cast<double>(data.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= data.size()) return data.back();
  const double frac = pos - static_cast<double>(lo);
  return data[lo] + frac * (data[lo + 1] - data[lo]);
}

double mean(const std::vector<double>& x) {
  if (x.empty()) throw ValidationError("mean: empty data");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(const std::vector<double>& x) {
  if (x.size() < 2) throw ValidationError("stddev: need at least 2 samples");
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

double rms(const std::vector<double>& x) {
  if (x.empty()) throw ValidationError("rms: empty data");
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

}  // namespace swingid
