#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace swingid {

struct LsqOptions {
  int max_iter = 1500;
  double cost_tol = 1e-10;   // relative cost decrease
  double step_tol = 1e-8;    // step infinity-norm in normalized coordinates
  double fd_rel_step = 1e-6;  // forward-difference Jacobian step
  double lambda_init = 1e-3;
};

struct LsqResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  double cost = 0.0;  // sum of squared residuals
  bool converged = false;
  int iterations = 0;
  int n_evals = 0;
  Eigen::VectorXd gradient;  // J^T r at the solution, original parameter scale
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Box-constrained nonlinear least squares: Levenberg-Marquardt with Marquardt
// diagonal scaling on parameters normalized to [0, 1], steps projected onto
// the box. The Jacobian is forward-difference. Convergence is declared when
// an accepted step changes the cost by less than cost_tol (relative) or
// moves less than step_tol in normalized coordinates, or when no descent
// direction remains (e.g. at an active bound).
LsqResult least_squares_box(const ResidualFn& fn, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& lb, const Eigen::VectorXd& ub,
                            const LsqOptions& opts = {});

}  // namespace swingid
