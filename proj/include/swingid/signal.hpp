#pragma once

#include <cstddef>
#include <vector>

namespace swingid {

// Digital Butterworth low-pass as transfer-function coefficients (b, a),
// designed by bilinear transform with frequency prewarping. a[0] == 1.
struct FilterCoeffs {
  std::vector<double> b, a;
};

FilterCoeffs butter_lowpass(int order, double cutoff_hz, double fs);

// Single-pass IIR filtering (direct form II transposed) with initial state
// scaled to the steady-state step response, and zero-phase forward-backward
// filtering with odd-reflection edge padding. filtfilt squares the magnitude
// response and cancels the phase, matching the usual offline implementation.
std::vector<double> lfilter(const FilterCoeffs& fc, const std::vector<double>& x,
                            double ic_scale);
std::vector<double> filtfilt(const FilterCoeffs& fc, const std::vector<double>& x);

// Zero-phase 4th-order Butterworth low-pass; cutoff_hz <= 0 returns x as-is.
std::vector<double> lowpass_zero_phase(const std::vector<double>& x, double cutoff_hz,
                                       double fs, int order = 4);

// Second-order central differences on a uniform grid; one-sided second-order
// stencils at the ends. deriv2 is the three-point second derivative.
std::vector<double> central_diff(const std::vector<double>& x, double dt);
std::vector<double> central_diff2(const std::vector<double>& x, double dt);

// Interpolant over a uniform grid t_i = t0 + i*dt. Cubic uses the Catmull-Rom
// slope rule (one-sided at the ends); Linear is piecewise linear. Evaluation
// outside the grid clamps to the end values.
class UniformSeries {
 public:
  enum class Kind { Linear, Cubic };

  UniformSeries() = default;
  UniformSeries(double t0, double dt, std::vector<double> values, Kind kind);

  double operator()(double t) const;
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return y_.size(); }
  double t_end() const { return t0_ + dt_ * static_cast<double>(y_.size() - 1); }
  const std::vector<double>& values() const { return y_; }

 private:
  double t0_ = 0.0, dt_ = 1.0;
  std::vector<double> y_, slope_;  // slope_ used by Cubic only (per-sample dy/dt)
  Kind kind_ = Kind::Linear;
};

// Resamples y (uniform grid, spacing dt_in) onto n_out equally spaced points
// spanning the same interval, cubic interpolation.
std::vector<double> resample_uniform(const std::vector<double>& y, std::size_t n_out);

std::vector<double> hann_window(std::size_t n);

// Sample quantile with linear interpolation between order statistics
// (numpy default). q in [0, 1]. data need not be sorted.
double quantile(std::vector<double> data, double q);

double mean(const std::vector<double>& x);
double stddev(const std::vector<double>& x);  // normalized by n-1
double rms(const std::vector<double>& x);

}  // namespace swingid
