#include <doctest.h>

#include <cmath>
#include <vector>

#include "swingid/errors.hpp"
#include "swingid/ident.hpp"
#include "test_support.hpp"

using namespace swingid;

namespace {

// Passive swing scenario: zero feedforward, the leg swings freely from a
// flexed posture. Returns the unperturbed recording; the feedforward series
// and initial state are written to the out-parameters.
Trajectory free_swing(const BodyModel& model, FeedForward& uff_out, State& x0_out,
                      double fs = 128.0, double duration = 0.7) {
  const auto n = static_cast<std::size_t>(std::lround(duration * fs)) + 1;
  uff_out.t0 = 0.0;
  uff_out.dt = 1.0 / fs;
  uff_out.pelvis.assign(n, 0.0);
  uff_out.thigh.assign(n, 0.0);
  uff_out.shank.assign(n, 0.0);
  uff_out.foot.assign(n, 0.0);

  x0_out.q = {0.0, 0.25, 0.40, 0.30};
  x0_out.qd = {0.4, -1.5, -1.0, -0.5};

  std::vector<double> pelvis_angle(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = uff_out.dt * static_cast<double>(i);
    pelvis_angle[i] = 0.12 + 0.04 * std::sin(2.0 * M_PI * t / duration);
  }
  return testutil::generate_recording(model, uff_out, x0_out, pelvis_angle, nullptr,
                                      nullptr);
}

}  // namespace

TEST_CASE("noise-free pair: parameters recovered, fit near-perfect") {
  const BodyModel model = testutil::reference_model();
  FeedForward uff;
  State x0;
  const Trajectory unpert = free_swing(model, uff, x0);

  const ImpedanceParams truth{{60.0, 30.0, 15.0}, {2.0, 1.0, 0.5}};
  testutil::PulseSpec pulse;
  pulse.onset = 0.30;
  pulse.width = 0.10;
  pulse.amp_x = 15.0;
  const Trajectory pert = testutil::generate_recording(model, uff, x0,
                                                       unpert.pelvis_angle, &truth,
                                                       &unpert, pulse);

  IdentOptions opts;
  opts.n_starts = 6;
  opts.seed = 11;
  IdentProblem problem(model, unpert, pert, pulse.onset, opts);

  // recovered feedforward of the passive swing is near zero away from the
  // boundary transient of the zero-phase filter (about 10 samples)
  const FeedForward& rec = problem.feedforward();
  for (std::size_t i = 12; i + 12 < rec.samples(); ++i) {
    CHECK(std::abs(rec.thigh[i]) < 0.05);
    CHECK(std::abs(rec.shank[i]) < 0.05);
    CHECK(std::abs(rec.foot[i]) < 0.05);
  }

  // prediction error at the true parameters is at round-trip level
  const Eigen::VectorXd e_true = problem.prediction_error(truth);
  CHECK(e_true.lpNorm<Eigen::Infinity>() < 2e-3);

  const IdentResult res = problem.identify();
  CHECK(res.n_converged >= 1);
  CHECK(std::abs(res.params.k.hip - truth.k.hip) < 1.0);
  CHECK(std::abs(res.params.k.knee - truth.k.knee) < 1.0);
  CHECK(std::abs(res.params.k.ankle - truth.k.ankle) < 1.0);
  CHECK(std::abs(res.params.d.hip - truth.d.hip) < 0.1);
  CHECK(std::abs(res.params.d.knee - truth.d.knee) < 0.1);
  CHECK(std::abs(res.params.d.ankle - truth.d.ankle) < 0.1);

  // optimizer does at least as well as the truth
  CHECK(res.cost <= e_true.squaredNorm() * (1.0 + 1e-9));

  CHECK(res.vaf.hip > 99.5);
  CHECK(res.vaf.knee > 99.5);
  CHECK(res.vaf.ankle > 95.0);
  CHECK(res.rmse < 1e-3);

  // window geometry
  CHECK(problem.sample_times().front() >= pulse.onset - 0.025 - 1e-9);
  CHECK(problem.sample_times().back() <= pulse.onset + 0.250 + 1e-9);
  CHECK(problem.window_samples() >= 30);
  CHECK(problem.window_samples() <= 40);
  CHECK(problem.prediction_error(truth).size() ==
        static_cast<long>(3 * problem.window_samples()));
}

TEST_CASE("identical recordings give exactly zero prediction error") {
  const BodyModel model = testutil::reference_model();
  FeedForward uff;
  State x0;
  const Trajectory unpert = free_swing(model, uff, x0);

  IdentOptions opts;
  IdentProblem problem(model, unpert, unpert, 0.30, opts);
  const ImpedanceParams some{{80.0, 10.0, 120.0}, {3.0, 0.2, 7.0}};
  const Eigen::VectorXd e = problem.prediction_error(some);
  CHECK(e.lpNorm<Eigen::Infinity>() == 0.0);

  const JointVec v = problem.vaf(some);
  CHECK(std::isnan(v.hip));
  CHECK(std::isnan(v.knee));
  CHECK(std::isnan(v.ankle));
}

TEST_CASE("identification is deterministic for a fixed seed") {
  const BodyModel model = testutil::reference_model();
  FeedForward uff;
  State x0;
  const Trajectory unpert = free_swing(model, uff, x0);
  const ImpedanceParams truth{{40.0, 20.0, 10.0}, {1.5, 0.8, 0.3}};
  testutil::PulseSpec pulse;
  pulse.onset = 0.30;
  pulse.width = 0.10;
  pulse.amp_x = 12.0;
  const Trajectory pert = testutil::generate_recording(model, uff, x0,
                                                       unpert.pelvis_angle, &truth,
                                                       &unpert, pulse);

  IdentOptions opts;
  opts.n_starts = 3;
  opts.seed = 7;
  IdentProblem problem(model, unpert, pert, pulse.onset, opts);
  const IdentResult a = problem.identify();
  const IdentResult b = problem.identify();
  CHECK(a.params.as_vector() == b.params.as_vector());
  CHECK(a.cost == b.cost);
  CHECK(a.best_start == b.best_start);

  // threaded multi-start picks the same solution
  IdentOptions topts = opts;
  topts.threads = 3;
  IdentProblem tproblem(model, unpert, pert, pulse.onset, topts);
  const IdentResult c = tproblem.identify();
  CHECK(a.params.as_vector() == c.params.as_vector());
  CHECK(a.best_start == c.best_start);
}

TEST_CASE("noisy pair: stationary fit with bounded parameter error") {
  const BodyModel model = testutil::reference_model();
  FeedForward uff;
  State x0;
  Trajectory unpert = free_swing(model, uff, x0);
  const ImpedanceParams truth{{60.0, 30.0, 15.0}, {2.0, 1.0, 0.5}};
  testutil::PulseSpec pulse;
  pulse.onset = 0.30;
  pulse.width = 0.10;
  pulse.amp_x = 15.0;
  Trajectory pert = testutil::generate_recording(model, uff, x0, unpert.pelvis_angle,
                                                 &truth, &unpert, pulse);
  Rng rng(2024);
  testutil::add_uniform_noise(unpert, rng, 0.005);
  testutil::add_uniform_noise(pert, rng, 0.005);

  IdentOptions opts;
  opts.n_starts = 6;
  opts.seed = 3;
  IdentProblem problem(model, unpert, pert, pulse.onset, opts);
  const IdentResult res = problem.identify();

  // hip and knee stay well-determined under measurement noise
  CHECK(std::abs(res.params.k.hip - truth.k.hip) < 10.0);
  CHECK(std::abs(res.params.k.knee - truth.k.knee) < 10.0);
  CHECK(std::abs(res.params.d.hip - truth.d.hip) < 1.0);
  CHECK(std::abs(res.params.d.knee - truth.d.knee) < 1.0);

  // the solution is stationary: central-difference cost gradient is small
  // relative to the cost, for parameters away from the bounds
  const Eigen::Matrix<double, 6, 1> xb = res.params.as_vector();
  const Eigen::Matrix<double, 6, 1> lb = ImpedanceParams::lower_bounds();
  const Eigen::Matrix<double, 6, 1> ub = ImpedanceParams::upper_bounds();
  for (int j = 0; j < 6; ++j) {
    const double span = ub[j] - lb[j];
    const double h = 1e-5 * span;
    if (xb[j] - lb[j] < 2.0 * h || ub[j] - xb[j] < 2.0 * h) continue;
    Eigen::Matrix<double, 6, 1> xp = xb, xm = xb;
    xp[j] += h;
    xm[j] -= h;
    const double cp = problem.prediction_error(ImpedanceParams::from_vector(xp)).squaredNorm();
    const double cm = problem.prediction_error(ImpedanceParams::from_vector(xm)).squaredNorm();
    const double g = (cp - cm) / (2.0 * h);
    CHECK(std::abs(g) * span <= 1e-2 * res.cost + 1e-12);
  }
}

TEST_CASE("identification input validation") {
  const BodyModel model = testutil::reference_model();
  FeedForward uff;
  State x0;
  const Trajectory unpert = free_swing(model, uff, x0);

  // window must fit inside the recordings
  CHECK_THROWS_AS(IdentProblem(model, unpert, unpert, 0.01, {}), ValidationError);
  CHECK_THROWS_AS(IdentProblem(model, unpert, unpert, 0.60, {}), ValidationError);

  // sample-rate mismatch
  Trajectory other = unpert;
  other.dt *= 2.0;
  CHECK_THROWS_AS(IdentProblem(model, unpert, other, 0.30, {}), ValidationError);
}
