#include <doctest.h>

#include <cmath>
#include <vector>

#include "swingid/errors.hpp"
#include "swingid/model.hpp"
#include "swingid/ode.hpp"
#include "test_support.hpp"

using namespace swingid;

TEST_CASE("integrator reproduces exponential decay to tolerance") {
  Dopri5<1> ode;
  auto f = [](double, const Eigen::Matrix<double, 1, 1>& y,
              Eigen::Matrix<double, 1, 1>& dy) { dy[0] = -2.0 * y[0]; };
  Eigen::Matrix<double, 1, 1> y0;
  y0 << 3.0;
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(0.1 * i);
  std::vector<Eigen::Matrix<double, 1, 1>> samples;
  auto yT = ode.integrate(f, 0.0, y0, 4.0, ts, &samples);
  CHECK(yT[0] == doctest::Approx(3.0 * std::exp(-8.0)).epsilon(1e-7));
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(samples[i][0] == doctest::Approx(3.0 * std::exp(-2.0 * ts[i])).epsilon(1e-6));
}

TEST_CASE("dense output tracks a harmonic oscillator between steps") {
  Dopri5<2> ode;
  auto f = [](double, const Eigen::Vector2d& y, Eigen::Vector2d& dy) {
    dy[0] = y[1];
    dy[1] = -25.0 * y[0];  // omega = 5
  };
  Eigen::Vector2d y0(1.0, 0.0);
  std::vector<double> ts;
  for (int i = 0; i <= 1000; ++i) ts.push_back(0.002 * i);
  std::vector<Eigen::Vector2d> samples;
  ode.integrate(f, 0.0, y0, 2.0, ts, &samples);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    worst = std::max(worst, std::abs(samples[i][0] - std::cos(5.0 * ts[i])));
  CHECK(worst < 1e-6);
}

TEST_CASE("unforced swing conserves energy to 1e-6 over one second") {
  const BodyModel m = testutil::reference_model();
  const DynConstants k(m);
  Dopri5<8> ode;
  auto f = [&](double, const Eigen::Matrix<double, 8, 1>& y,
               Eigen::Matrix<double, 8, 1>& dy) {
    GenCoord q{y[0], y[1], y[2], y[3]};
    GenCoord qd{y[4], y[5], y[6], y[7]};
    Vec4 c, g;
    bias_forces(k, q, qd, c, g);
    const Vec4 qdd = mass_matrix(k, q).ldlt().solve(-c + g);
    dy.head<4>() = qd.vec();
    dy.tail<4>() = qdd;
  };

  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    State s0;
    s0.q = GenCoord{0.0, rng.uniform(-0.5, 0.5), rng.uniform(-0.6, 0.6),
                    rng.uniform(-0.8, 0.8)};
    s0.qd = GenCoord{rng.uniform(-0.5, 0.5), rng.uniform(-2, 2), rng.uniform(-2, 2),
                     rng.uniform(-3, 3)};
    Eigen::Matrix<double, 8, 1> y0;
    y0 << s0.q.vec(), s0.qd.vec();
    const double e0 = kinetic_energy(m, s0) + potential_energy(m, s0.q);

    std::vector<double> ts;
    for (int i = 0; i <= 100; ++i) ts.push_back(0.01 * i);
    std::vector<Eigen::Matrix<double, 8, 1>> samples;
    ode.integrate(f, 0.0, y0, 1.0, ts, &samples);
    for (const auto& y : samples) {
      State s{GenCoord{y[0], y[1], y[2], y[3]}, GenCoord{y[4], y[5], y[6], y[7]}};
      const double e = kinetic_energy(m, s) + potential_energy(m, s.q);
      CHECK(std::abs(e - e0) / std::max(1.0, std::abs(e0)) < 1e-6);
    }
  }
}

TEST_CASE("tightening tolerances reduces integration error") {
  auto f = [](double t, const Eigen::Matrix<double, 1, 1>& y,
              Eigen::Matrix<double, 1, 1>& dy) { dy[0] = std::cos(t) * y[0]; };
  Eigen::Matrix<double, 1, 1> y0;
  y0 << 1.0;
  const double exact = std::exp(std::sin(3.0));
  OdeOptions loose;
  loose.rtol = 1e-4;
  loose.atol = 1e-6;
  OdeOptions tight;
  tight.rtol = 1e-11;
  tight.atol = 1e-13;
  const double e_loose =
      std::abs(Dopri5<1>(loose).integrate(f, 0.0, y0, 3.0, {}, nullptr)[0] - exact);
  const double e_tight =
      std::abs(Dopri5<1>(tight).integrate(f, 0.0, y0, 3.0, {}, nullptr)[0] - exact);
  CHECK(e_tight < e_loose);
  CHECK(e_tight < 1e-9);
}

TEST_CASE("non-finite dynamics abort with a diagnostic") {
  Dopri5<1> ode;
  auto f = [](double t, const Eigen::Matrix<double, 1, 1>& y,
              Eigen::Matrix<double, 1, 1>& dy) {
    dy[0] = t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : y[0];
  };
  Eigen::Matrix<double, 1, 1> y0;
  y0 << 1.0;
  CHECK_THROWS_AS(ode.integrate(f, 0.0, y0, 1.0, {}, nullptr), SimulationError);
}
