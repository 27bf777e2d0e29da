#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "swingid/dynamics.hpp"
#include "swingid/lsq.hpp"

namespace swingid {

struct IdentOptions {
  int n_starts = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  double window_before = 0.025;  // s of data kept before the perturbation onset
  double window_after = 0.250;   // s kept after
  SimOptions sim;
  LsqOptions lsq;
};

struct StartReport {
  Eigen::Matrix<double, 6, 1> x0;  // start point, physical units
  ImpedanceParams params;          // local solution
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct IdentResult {
  ImpedanceParams params;
  double cost = 0.0;  // sum of squared prediction errors, rad^2
  double rmse = 0.0;  // rad
  JointVec vaf;       // % per joint, at the best parameters
  int best_start = -1;
  int n_converged = 0;
  std::vector<StartReport> starts;
};

// Joint impedance identification from one unperturbed / perturbed recording
// pair. The feedforward is recovered from the unperturbed recording by
// inverse dynamics; both conditions are then simulated with impedance
// feedback around the unperturbed movement, and the parameters are fit by
// multi-start bounded least squares on the prediction error
//   e = (ang_p - ang_u)_measured - (ang_p - ang_u)_simulated
// stacked over hip, knee and ankle inside the analysis window.
class IdentProblem {
 public:
  IdentProblem(const BodyModel& model, const Trajectory& unperturbed,
               const Trajectory& perturbed, double onset, const IdentOptions& opts = {});
  ~IdentProblem();
  IdentProblem(IdentProblem&&) noexcept;
  IdentProblem& operator=(IdentProblem&&) noexcept;

  Eigen::VectorXd prediction_error(const ImpedanceParams& p) const;

  // Variance accounted for (%) of the measured response difference, per
  // joint. NaN when a channel's measured difference has no variance.
  JointVec vaf(const ImpedanceParams& p) const;

  IdentResult identify() const;

  std::size_t window_samples() const;
  const std::vector<double>& sample_times() const;
  const FeedForward& feedforward() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace swingid
