#include "swingid/ident.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "swingid/errors.hpp"
#include "swingid/rng.hpp"
#include "swingid/signal.hpp"

namespace swingid {

namespace {

double variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

}  // namespace

struct IdentProblem::Impl {
  IdentOptions opts;
  FeedForward u_ff;
  std::unique_ptr<PreparedSim> sim_u, sim_p;
  std::vector<JointVec> meas_diff;  // raw measured (p - u) joint angles
  std::vector<double> ts;

  Impl(const BodyModel& model, const Trajectory& unperturbed, const Trajectory& perturbed,
       double onset, const IdentOptions& o)
      : opts(o) {
    unperturbed.validate();
    perturbed.validate();
    if (std::abs(unperturbed.dt - perturbed.dt) > 1e-12 * unperturbed.dt)
      throw ValidationError("identification: recordings have different sample rates");
    if (opts.n_starts < 1) throw ValidationError("identification: n_starts must be >= 1");

    SimWindow window{onset - opts.window_before, onset + opts.window_after};
    if (window.t_begin < unperturbed.t0 - 1e-9 || window.t_begin < perturbed.t0 - 1e-9)
      throw ValidationError("identification: window starts before the recordings");
    if (window.t_end > unperturbed.t_end() + 1e-9 || window.t_end > perturbed.t_end() + 1e-9)
      throw ValidationError("identification: window ends after the recordings");

    u_ff = inverse_dynamics(model, unperturbed, opts.sim.diff);
    sim_u = std::make_unique<PreparedSim>(model, u_ff, unperturbed, nullptr, window,
                                          opts.sim);
    sim_p = std::make_unique<PreparedSim>(model, u_ff, unperturbed, &perturbed, window,
                                          opts.sim);
    ts = sim_u->sample_times();

    const auto& mu = sim_u->measured_joint_angles();
    const auto& mp = sim_p->measured_joint_angles();
    meas_diff.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
      meas_diff.push_back({mp[i].hip - mu[i].hip, mp[i].knee - mu[i].knee,
                           mp[i].ankle - mu[i].ankle});
  }

  Eigen::VectorXd prediction_error(const ImpedanceParams& p) const {
    const SimResult ru = sim_u->run(p);
    const SimResult rp = sim_p->run(p);
    const std::size_t n = ts.size();
    Eigen::VectorXd e(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      e[static_cast<long>(i)] =
          meas_diff[i].hip - (rp.joint_ang[i].hip - ru.joint_ang[i].hip);
      e[static_cast<long>(n + i)] =
          meas_diff[i].knee - (rp.joint_ang[i].knee - ru.joint_ang[i].knee);
      e[static_cast<long>(2 * n + i)] =
          meas_diff[i].ankle - (rp.joint_ang[i].ankle - ru.joint_ang[i].ankle);
    }
    return e;
  }

  JointVec vaf(const ImpedanceParams& p) const {
    const Eigen::VectorXd e = prediction_error(p);
    const std::size_t n = ts.size();
    double out[3];
    for (int j = 0; j < 3; ++j) {
      std::vector<double> meas(n), res(n);
      for (std::size_t i = 0; i < n; ++i) {
        meas[i] = (j == 0) ? meas_diff[i].hip
                           : (j == 1 ? meas_diff[i].knee : meas_diff[i].ankle);
        res[i] = e[static_cast<long>(static_cast<std::size_t>(j) * n + i)];
      }
      const double vm = variance(meas);
      out[j] = vm > 0.0 ? 100.0 * (1.0 - variance(res) / vm)
                        : std::numeric_limits<double>::quiet_NaN();
    }
    return {out[0], out[1], out[2]};
  }
};

IdentProblem::IdentProblem(const BodyModel& model, const Trajectory& unperturbed,
                           const Trajectory& perturbed, double onset,
                           const IdentOptions& opts)
    : impl_(std::make_unique<Impl>(model, unperturbed, perturbed, onset, opts)) {}

IdentProblem::~IdentProblem() = default;
IdentProblem::IdentProblem(IdentProblem&&) noexcept = default;
IdentProblem& IdentProblem::operator=(IdentProblem&&) noexcept = default;

Eigen::VectorXd IdentProblem::prediction_error(const ImpedanceParams& p) const {
  return impl_->prediction_error(p);
}

JointVec IdentProblem::vaf(const ImpedanceParams& p) const { return impl_->vaf(p); }

std::size_t IdentProblem::window_samples() const { return impl_->ts.size(); }

const std::vector<double>& IdentProblem::sample_times() const { return impl_->ts; }

const FeedForward& IdentProblem::feedforward() const { return impl_->u_ff; }

IdentResult IdentProblem::identify() const {
  const IdentOptions& opts = impl_->opts;
  const Eigen::Matrix<double, 6, 1> lb = ImpedanceParams::lower_bounds();
  const Eigen::Matrix<double, 6, 1> ub = ImpedanceParams::upper_bounds();

  std::vector<StartReport> reports(static_cast<std::size_t>(opts.n_starts));
  auto solve_one = [&](int s) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(s)));
    Eigen::Matrix<double, 6, 1> x0;
    for (int i = 0; i < 6; ++i) x0[i] = rng.uniform(lb[i], ub[i]);

    auto fn = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      Eigen::Matrix<double, 6, 1> v = x;
      return impl_->prediction_error(ImpedanceParams::from_vector(v));
    };
    const LsqResult r = least_squares_box(fn, x0, lb, ub, opts.lsq);

    StartReport& rep = reports[static_cast<std::size_t>(s)];
    rep.x0 = x0;
    rep.params = ImpedanceParams::from_vector(r.x);
    rep.cost = r.cost;
    rep.converged = r.converged;
    rep.iterations = r.iterations;
  };

  const int nthreads = std::max(1, std::min(opts.threads, opts.n_starts));
  if (nthreads == 1) {
    for (int s = 0; s < opts.n_starts; ++s) solve_one(s);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&] {
        for (int s = next.fetch_add(1); s < opts.n_starts; s = next.fetch_add(1))
          solve_one(s);
      });
    for (auto& th : pool) th.join();
  }

  IdentResult out;
  out.starts = std::move(reports);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.n_starts; ++s) {
    const StartReport& rep = out.starts[static_cast<std::size_t>(s)];
    if (!rep.converged) continue;
    ++out.n_converged;
    // strictly better, with a relative tie band resolved to the lower index
    if (rep.cost < best * (1.0 - 1e-12)) {
      best = rep.cost;
      out.best_start = s;
    }
  }
  if (out.best_start < 0)
    throw IdentError("identification: no restart converged");

  const StartReport& bs = out.starts[static_cast<std::size_t>(out.best_start)];
  out.params = bs.params;
  out.cost = bs.cost;
  out.rmse = std::sqrt(bs.cost / static_cast<double>(3 * impl_->ts.size()));
  out.vaf = impl_->vaf(out.params);
  return out;
}

}  // namespace swingid
