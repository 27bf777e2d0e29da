#include <doctest.h>

#include <cmath>
#include <vector>

#include "swingid/errors.hpp"
#include "swingid/rng.hpp"
#include "swingid/signal.hpp"

using namespace swingid;

TEST_CASE("butterworth low-pass has unit DC gain and attenuates high frequency") {
  const double fs = 128.0;
  auto fc = butter_lowpass(4, 40.0, fs);
  CHECK(fc.b.size() == 5);
  CHECK(fc.a.size() == 5);
  CHECK(fc.a[0] == doctest::Approx(1.0));

  // DC: constant in, constant out
  std::vector<double> x(512, 2.5);
  auto y = filtfilt(fc, x);
  for (double v : y) CHECK(v == doctest::Approx(2.5).epsilon(1e-9));

  // 60 Hz is above the 40 Hz cutoff at fs 128: magnitude stays tiny after the
  // two passes (|H|^2); 5 Hz passes nearly untouched.
  std::vector<double> hi(2048), lo(2048);
  for (std::size_t i = 0; i < hi.size(); ++i) {
    hi[i] = std::sin(2 * M_PI * 60.0 * i / fs);
    lo[i] = std::sin(2 * M_PI * 5.0 * i / fs);
  }
  auto yh = filtfilt(fc, hi);
  auto yl = filtfilt(fc, lo);
  double hi_amp = 0, lo_err = 0;
  for (std::size_t i = 200; i < hi.size() - 200; ++i) {
    hi_amp = std::max(hi_amp, std::abs(yh[i]));
    lo_err = std::max(lo_err, std::abs(yl[i] - lo[i]));
  }
  CHECK(hi_amp < 0.05);
  CHECK(lo_err < 0.01);
}

TEST_CASE("filtfilt is zero-phase: passband sinusoid keeps its phase") {
  const double fs = 128.0;
  auto fc = butter_lowpass(4, 40.0, fs);
  std::vector<double> x(4096);
  const double f0 = 8.0;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(2 * M_PI * f0 * i / fs);
  auto y = filtfilt(fc, x);
  // correlate against quadrature components away from the edges
  double ci = 0, cq = 0;
  for (std::size_t i = 500; i < x.size() - 500; ++i) {
    ci += y[i] * std::cos(2 * M_PI * f0 * i / fs);
    cq += y[i] * std::sin(2 * M_PI * f0 * i / fs);
  }
  CHECK(std::abs(std::atan2(cq, ci)) < 1e-6);  // phase shift ~ 0
}

TEST_CASE("central differences are exact on quadratics and cubics") {
  const double dt = 0.01;
  std::vector<double> x(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = dt * static_cast<double>(i);
    x[i] = 1.5 + 2.0 * t + 3.0 * t * t;
  }
  auto d1 = central_diff(x, dt);
  auto d2 = central_diff2(x, dt);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = dt * static_cast<double>(i);
    CHECK(d1[i] == doctest::Approx(2.0 + 6.0 * t).epsilon(1e-9));
    CHECK(d2[i] == doctest::Approx(6.0).epsilon(1e-7));
  }
}

TEST_CASE("uniform series interpolation hits knots and reproduces lines") {
  std::vector<double> y{0.0, 1.0, 0.5, -0.25, 0.75};
  UniformSeries cub(2.0, 0.5, y, UniformSeries::Kind::Cubic);
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(cub(2.0 + 0.5 * i) == doctest::Approx(y[i]).epsilon(1e-14));
  CHECK(cub(1.0) == y.front());   // clamped
  CHECK(cub(10.0) == y.back());

  std::vector<double> lin(20);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = 3.0 - 0.7 * static_cast<double>(i);
  UniformSeries c2(0.0, 1.0, lin, UniformSeries::Kind::Cubic);
  UniformSeries l2(0.0, 1.0, lin, UniformSeries::Kind::Linear);
  for (double t = 0.0; t <= 19.0; t += 0.13) {
    CHECK(c2(t) == doctest::Approx(3.0 - 0.7 * t).epsilon(1e-12));
    CHECK(l2(t) == doctest::Approx(3.0 - 0.7 * t).epsilon(1e-12));
  }
}

TEST_CASE("interpolation error shrinks with the cubic order on smooth signals") {
  std::vector<double> y(65);
  const double dt = 1.0 / 64.0;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::sin(2 * M_PI * 2.0 * dt * i);
  UniformSeries cub(0.0, dt, y, UniformSeries::Kind::Cubic);
  UniformSeries lin(0.0, dt, y, UniformSeries::Kind::Linear);
  double ec = 0, el = 0;
  for (double t = 0.1; t < 0.9; t += 0.0017) {
    ec = std::max(ec, std::abs(cub(t) - std::sin(2 * M_PI * 2.0 * t)));
    el = std::max(el, std::abs(lin(t) - std::sin(2 * M_PI * 2.0 * t)));
  }
  CHECK(ec < el / 10.0);
  CHECK(ec < 2e-4);
}

TEST_CASE("resample_uniform preserves endpoints and constants") {
  std::vector<double> c(214, 4.25);
  auto r = resample_uniform(c, 500);
  CHECK(r.size() == 500);
  for (double v : r) CHECK(v == doctest::Approx(4.25).epsilon(1e-13));

  std::vector<double> y(100);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::cos(0.07 * static_cast<double>(i));
  auto r2 = resample_uniform(y, 500);
  CHECK(r2.front() == doctest::Approx(y.front()).epsilon(1e-12));
  CHECK(r2.back() == doctest::Approx(y.back()).epsilon(1e-12));
}

TEST_CASE("quantile uses linear interpolation between order statistics") {
  std::vector<double> d{1, 2, 3, 4};
  CHECK(quantile(d, 0.0) == 1.0);
  CHECK(quantile(d, 1.0) == 4.0);
  CHECK(quantile(d, 0.25) == doctest::Approx(1.75));
  CHECK(quantile(d, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(d, 0.75) == doctest::Approx(3.25));
}

TEST_CASE("basic statistics") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  CHECK(mean(x) == doctest::Approx(2.5));
  CHECK(stddev(x) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(rms(x) == doctest::Approx(std::sqrt(30.0 / 4.0)));
  CHECK_THROWS_AS(mean({}), ValidationError);
}

TEST_CASE("filter input validation") {
  CHECK_THROWS_AS(butter_lowpass(4, 70.0, 128.0), ValidationError);
  CHECK_THROWS_AS(butter_lowpass(4, 0.0, 128.0), ValidationError);
  auto fc = butter_lowpass(4, 40.0, 128.0);
  CHECK_THROWS_AS(filtfilt(fc, std::vector<double>(5, 1.0)), ValidationError);
}
