#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "swingid/errors.hpp"
#include "swingid/lsq.hpp"

using namespace swingid;

TEST_CASE("linear least squares is solved to high accuracy") {
  // r(x) = A x - b with a known well-conditioned A
  Eigen::MatrixXd A(4, 2);
  A << 1, 2, 3, -1, 0.5, 0.25, -2, 1;
  Eigen::VectorXd b(4);
  b << 1, -2, 0.5, 3;
  auto fn = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x - b; };

  const Eigen::VectorXd expected =
      (A.transpose() * A).ldlt().solve(A.transpose() * b);

  Eigen::VectorXd lb = Eigen::VectorXd::Constant(2, -10.0);
  Eigen::VectorXd ub = Eigen::VectorXd::Constant(2, 10.0);
  auto res = least_squares_box(fn, Eigen::VectorXd::Zero(2), lb, ub);
  CHECK(res.converged);
  CHECK((res.x - expected).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("rosenbrock valley converges from multiple starts") {
  auto fn = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd r(2);
    r << 10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0];
    return r;
  };
  Eigen::VectorXd lb = Eigen::VectorXd::Constant(2, -5.0);
  Eigen::VectorXd ub = Eigen::VectorXd::Constant(2, 5.0);
  for (double sx : {-1.2, 0.0, 3.0}) {
    Eigen::VectorXd x0(2);
    x0 << sx, sx * 0.5;
    LsqOptions opts;
    opts.max_iter = 300;
    auto res = least_squares_box(fn, x0, lb, ub, opts);
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.cost < 1e-14);
  }
}

TEST_CASE("solutions outside the box land on the active bound") {
  // minimize ||x - target||^2 with the target outside the box
  Eigen::VectorXd target(3);
  target << 5.0, -3.0, 0.25;
  auto fn = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x - target; };
  Eigen::VectorXd lb = Eigen::VectorXd::Constant(3, 0.0);
  Eigen::VectorXd ub = Eigen::VectorXd::Constant(3, 1.0);
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(3, 0.5);
  auto res = least_squares_box(fn, x0, lb, ub);
  CHECK(res.converged);
  CHECK(res.x[0] == doctest::Approx(1.0));   // clipped high
  CHECK(res.x[1] == doctest::Approx(0.0));   // clipped low
  CHECK(res.x[2] == doctest::Approx(0.25));  // interior
}

TEST_CASE("iterates never leave the box") {
  // steep curved residual tempting large steps
  int violations = 0;
  Eigen::VectorXd lb(2), ub(2);
  lb << -1.0, -1.0;
  ub << 2.0, 2.0;
  auto fn = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    for (int i = 0; i < 2; ++i)
      if (x[i] < lb[i] - 1e-12 || x[i] > ub[i] + 1e-12) ++violations;
    Eigen::VectorXd r(2);
    r << 100.0 * std::sin(3.0 * x[0]) + x[1] * x[1], 20.0 * (x[1] - 1.7);
    return r;
  };
  Eigen::VectorXd x0(2);
  x0 << 1.9, -0.9;
  auto res = least_squares_box(fn, x0, lb, ub);
  CHECK(violations == 0);
  CHECK(res.x[0] >= lb[0]);
  CHECK(res.x[1] <= ub[1]);
}

TEST_CASE("zero residual at the start returns immediately with convergence") {
  auto fn = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return Eigen::VectorXd::Zero(3) * x.sum();
  };
  Eigen::VectorXd lb = Eigen::VectorXd::Constant(2, -1.0);
  Eigen::VectorXd ub = Eigen::VectorXd::Constant(2, 1.0);
  auto res = least_squares_box(fn, Eigen::VectorXd::Zero(2), lb, ub);
  CHECK(res.converged);
  CHECK(res.cost == 0.0);
}

TEST_CASE("bound validation") {
  auto fn = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x; };
  Eigen::VectorXd lb = Eigen::VectorXd::Constant(2, 1.0);
  Eigen::VectorXd ub = Eigen::VectorXd::Constant(2, 0.0);
  CHECK_THROWS_AS(least_squares_box(fn, Eigen::VectorXd::Zero(2), lb, ub),
                  ValidationError);
}
