#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "swingid/errors.hpp"

namespace swingid {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_init = 1e-3;
  double h_max = 0.0;  // 0: no cap beyond the interval length
  std::size_t max_steps = 2'000'000;
};

// Dormand-Prince 5(4) adaptive Runge-Kutta with the standard quartic
// dense-output interpolant. Fixed state dimension N keeps the hot path free
// of allocation; F is void(double t, const Vec& y, Vec& dydt).
template <int N>
class Dopri5 {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;

  explicit Dopri5(const OdeOptions& opt = {}) : opt_(opt) {}

  // Integrates y' = f(t, y) from t0 to t1 (t1 > t0), writing interpolated
  // states at the requested sample times (ascending, within [t0, t1]) into
  // samples_out. Returns the state at t1. `breakpoints` (ascending) are times
  // the integrator must land on exactly; use them where the right-hand side
  // loses smoothness (e.g. knots of interpolated input signals) so the local
  // error estimate stays valid.
  template <typename F>
  Vec integrate(F&& f, double t0, const Vec& y0, double t1,
                std::span<const double> sample_ts, std::vector<Vec>* samples_out,
                std::span<const double> breakpoints = {}) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // difference between 5th- and 4th-order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    // dense-output polynomial coefficients (rows k1..k7, powers theta^1..^4
    // get y += h * sum_k K_k * (P[k][0] th + P[k][1] th^2 + ...))
    static constexpr double P[7][4] = {
        {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
         -12715105075.0 / 11282082432.0},
        {0.0, 0.0, 0.0, 0.0},
        {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
         87487479700.0 / 32700410799.0},
        {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
         -10690763975.0 / 1880347072.0},
        {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
         701980252875.0 / 199316789632.0},
        {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0,
         -1453857185.0 / 822651844.0},
        {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0,
         69997945.0 / 29380423.0}};

    if (!(t1 > t0)) throw SimulationError("ode: t1 must exceed t0");
    const double span = t1 - t0;
    const double h_cap = opt_.h_max > 0.0 ? std::min(opt_.h_max, span) : span;

    Vec y = y0;
    Vec k1, k2, k3, k4, k5, k6, k7, y_new, y_err, y_tmp;
    f(t0, y, k1);
    check_finite(k1, t0, "derivative");

    double t = t0;
    double h = std::min(opt_.h_init, h_cap);
    std::size_t sample_idx = 0;
    if (samples_out) {
      samples_out->clear();
      samples_out->reserve(sample_ts.size());
      // samples exactly at t0
      while (sample_idx < sample_ts.size() && sample_ts[sample_idx] <= t0) {
        samples_out->push_back(y);
        ++sample_idx;
      }
    }

    std::size_t bp_idx = 0;
    for (std::size_t step = 0; step < opt_.max_steps; ++step) {
      if (t >= t1) break;
      double h_try = std::min(h, t1 - t);
      while (bp_idx < breakpoints.size() && breakpoints[bp_idx] <= t + 1e-12)
        ++bp_idx;
      if (bp_idx < breakpoints.size() && breakpoints[bp_idx] < t1)
        h_try = std::min(h_try, breakpoints[bp_idx] - t);
      const double h_step = h_try;
      if (!(h_step > std::abs(t) * 1e-15 + 1e-300))
        throw SimulationError("ode: step size underflow at t = " + std::to_string(t));

      y_tmp = y + h_step * (a21 * k1);
      f(t + c2 * h_step, y_tmp, k2);
      y_tmp = y + h_step * (a31 * k1 + a32 * k2);
      f(t + c3 * h_step, y_tmp, k3);
      y_tmp = y + h_step * (a41 * k1 + a42 * k2 + a43 * k3);
      f(t + c4 * h_step, y_tmp, k4);
      y_tmp = y + h_step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      f(t + c5 * h_step, y_tmp, k5);
      y_tmp = y + h_step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      f(t + h_step, y_tmp, k6);
      y_new = y + h_step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      f(t + h_step, y_new, k7);  // FSAL
      y_err = h_step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double err = 0.0;
      for (int i = 0; i < N; ++i) {
        const double scale =
            opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(y_err[i]) / scale);
      }

      if (err <= 1.0) {
        check_finite(y_new, t + h_step, "state");
        if (samples_out) {
          while (sample_idx < sample_ts.size() &&
                 sample_ts[sample_idx] <= t + h_step + 1e-12) {
            const double th = std::clamp((sample_ts[sample_idx] - t) / h_step, 0.0, 1.0);
            Vec acc = Vec::Zero();
            const Vec* ks[7] = {&k1, &k2, &k3, &k4, &k5, &k6, &k7};
            for (int ki = 0; ki < 7; ++ki) {
              double poly = 0.0;
              for (int p = 3; p >= 0; --p) poly = (poly + P[ki][p]) * th;
              acc += poly * (*ks[ki]);
            }
            samples_out->push_back(y + h_step * acc);
            ++sample_idx;
          }
        }
        t += h_step;
        y = y_new;
        k1 = k7;
        const double factor =
            err == 0.0 ? 4.0 : std::clamp(kSafety * std::pow(err, -0.2), 0.2, 4.0);
        double h_next = h_step * factor;
        // a step truncated to land on a breakpoint must not collapse the
        // controller's preferred size
        if (h_step < h * (1.0 - 1e-12)) h_next = std::max(h_next, h);
        h = std::min(h_next, h_cap);
        if (t >= t1) break;
      } else {
        h = h_step * std::max(0.2, kSafety * std::pow(err, -0.2));
      }
    }
    if (t < t1)
      throw SimulationError("ode: exceeded max step count before reaching t1");
    if (samples_out)
      while (sample_idx < sample_ts.size()) {
        samples_out->push_back(y);
        ++sample_idx;
      }
    return y;
  }

 private:
  static constexpr double kSafety = 0.9;

  static void check_finite(const Vec& v, double t, const char* what) {
    for (int i = 0; i < N; ++i)
      if (!std::isfinite(v[i]))
        throw SimulationError(std::string("ode: non-finite ") + what + " at t = " +
                              std::to_string(t) + " (component " + std::to_string(i) + ")");
  }

  OdeOptions opt_;
};

}  // namespace swingid
