#include "swingid/lsq.hpp"

#include <cmath>

#include "swingid/errors.hpp"

namespace swingid {

LsqResult least_squares_box(const ResidualFn& fn, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& lb, const Eigen::VectorXd& ub,
                            const LsqOptions& opts) {
  const Eigen::Index n = x0.size();
  if (lb.size() != n || ub.size() != n)
    throw ValidationError("least_squares_box: bound dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(ub[i] > lb[i]))
      throw ValidationError("least_squares_box: need ub > lb per component");

  const Eigen::VectorXd span = ub - lb;
  auto to_x = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return lb + z.cwiseProduct(span);
  };
  auto clamp01 = [](Eigen::VectorXd z) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std::clamp(z[i], 0.0, 1.0);
    return z;
  };

  LsqResult out;
  Eigen::VectorXd z = clamp01((x0 - lb).cwiseQuotient(span));
  Eigen::VectorXd r = fn(to_x(z));
  out.n_evals = 1;
  double cost = r.squaredNorm();

  const Eigen::Index m = r.size();
  Eigen::MatrixXd J(m, n);
  double lambda = opts.lambda_init;
  bool need_jacobian = true;
  bool converged = false;
  int iter = 0;

  for (; iter < opts.max_iter && !converged; ++iter) {
    if (need_jacobian) {
      for (Eigen::Index j = 0; j < n; ++j) {
        double h = opts.fd_rel_step * std::max(std::abs(z[j]), 1.0);
        if (z[j] + h > 1.0) h = -h;  // stay inside the box
        Eigen::VectorXd zj = z;
        zj[j] += h;
        J.col(j) = (fn(to_x(zj)) - r) / h;
        ++out.n_evals;
      }
      need_jacobian = false;
    }

    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;

    bool accepted = false;
    for (int tries = 0; tries < 25 && !accepted; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (Eigen::Index i = 0; i < n; ++i)
        a(i, i) += lambda * std::max(jtj(i, i), 1e-12);
      const Eigen::VectorXd p = a.ldlt().solve(-g);
      const Eigen::VectorXd z_new = clamp01(z + p);
      const Eigen::VectorXd step = z_new - z;
      if (step.lpNorm<Eigen::Infinity>() == 0.0) {
        // projection annihilated the step: either converged at the boundary
        // or lambda must grow to turn the step inward
        lambda *= 4.0;
        if (lambda > 1e14) {
          converged = true;
          break;
        }
        continue;
      }
      const Eigen::VectorXd r_new = fn(to_x(z_new));
      ++out.n_evals;
      const double cost_new = r_new.squaredNorm();
      if (cost_new < cost) {
        const double rel_drop = (cost - cost_new) / std::max(cost, 1e-300);
        z = z_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda / 3.0, 1e-12);
        need_jacobian = true;
        accepted = true;
        // either criterion terminates: relative cost improvement exhausted,
        // or the accepted step is negligible on the normalized scale
        if (rel_drop < opts.cost_tol ||
            step.lpNorm<Eigen::Infinity>() < opts.step_tol)
          converged = true;
      } else {
        lambda *= 4.0;
        if (lambda > 1e14) {
          // no descent direction left at this point
          converged = true;
          break;
        }
      }
    }
    if (!accepted && !converged) {
      // inner loop exhausted without progress
      converged = true;
    }
  }

  out.x = to_x(z);
  out.residual = r;
  out.cost = cost;
  out.converged = converged;
  out.iterations = iter;
  // gradient in original parameter scale (chain rule through the
  // normalization): dC/dx_i = 2 (J^T r)_i / span_i
  out.gradient = 2.0 * (J.transpose() * r).cwiseQuotient(span);
  return out;
}

}  // namespace swingid
