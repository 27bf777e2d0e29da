#include "swingid/synthval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "swingid/csv.hpp"
#include "swingid/errors.hpp"
#include "swingid/ode.hpp"
#include "swingid/rng.hpp"
#include "swingid/signal.hpp"

namespace swingid {

Trajectory simulate_recording(const BodyModel& model, const FeedForward& u_ff,
                              const State& x0, const std::vector<double>& pelvis_angle,
                              const ImpedanceParams* feedback, const Trajectory* fb_ref,
                              const Pulse& pulse) {
  model.validate();
  u_ff.validate();
  const std::size_t n = u_ff.samples();
  if (pelvis_angle.size() != n)
    throw ValidationError("simulate_recording: pelvis series length mismatch");
  if (feedback && !fb_ref)
    throw ValidationError("simulate_recording: feedback requires a reference");

  using K = UniformSeries::Kind;
  const double t0 = u_ff.t0, dt = u_ff.dt;

  Trajectory out;
  out.t0 = t0;
  out.dt = dt;
  out.pelvis_angle = pelvis_angle;
  out.force_x.assign(n, 0.0);
  out.force_y.assign(n, 0.0);
  if (pulse.onset >= 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = t0 + dt * static_cast<double>(i);
      if (t >= pulse.onset && t < pulse.onset + pulse.width) {
        out.force_x[i] = pulse.amp_x;
        out.force_y[i] = pulse.amp_y;
      }
    }
  }

  const UniformSeries uff[4] = {UniformSeries(t0, dt, u_ff.pelvis, K::Cubic),
                                UniformSeries(t0, dt, u_ff.thigh, K::Cubic),
                                UniformSeries(t0, dt, u_ff.shank, K::Cubic),
                                UniformSeries(t0, dt, u_ff.foot, K::Cubic)};
  const UniformSeries fx(t0, dt, out.force_x, K::Linear);
  const UniformSeries fy(t0, dt, out.force_y, K::Linear);
  const UniformSeries pa(t0, dt, pelvis_angle, K::Cubic);
  const UniformSeries pr(t0, dt, central_diff(pelvis_angle, dt), K::Cubic);

  UniformSeries ref_ang[3], ref_rate[3];
  if (feedback) {
    std::vector<double> ang[3];
    const std::size_t m = fb_ref->samples();
    for (int j = 0; j < 3; ++j) ang[j].resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const JointVec a = fb_ref->joint_angles_at(i);
      ang[0][i] = a.hip;
      ang[1][i] = a.knee;
      ang[2][i] = a.ankle;
    }
    for (int j = 0; j < 3; ++j) {
      ref_rate[j] = UniformSeries(fb_ref->t0, fb_ref->dt,
                                  central_diff(ang[j], fb_ref->dt), K::Cubic);
      ref_ang[j] = UniformSeries(fb_ref->t0, fb_ref->dt, std::move(ang[j]), K::Cubic);
    }
  }

  const DynConstants kc(model);
  auto rhs = [&](double t, const Eigen::Matrix<double, 8, 1>& y,
                 Eigen::Matrix<double, 8, 1>& dy) {
    const GenCoord q{y[0], y[1], y[2], y[3]};
    const GenCoord qd{y[4], y[5], y[6], y[7]};
    Vec4 u;
    for (int c = 0; c < 4; ++c) u[c] = uff[c](t);
    if (feedback) {
      const JointVec a = joint_angles(q, pa(t));
      const JointVec r = joint_rates(qd, pr(t));
      const JointVec ra{ref_ang[0](t), ref_ang[1](t), ref_ang[2](t)};
      const JointVec rr{ref_rate[0](t), ref_rate[1](t), ref_rate[2](t)};
      u += joint_torques_to_genforce(feedback_torques(*feedback, a, r, ra, rr)).vec();
    }
    if (pulse.onset >= 0.0) {
      const double arm = model.interaction_offset;
      u[0] += fx(t);
      u[1] += arm * (-std::cos(q.thigh) * fx(t) + std::sin(q.thigh) * fy(t));
    }
    Vec4 c, g;
    bias_forces(kc, q, qd, c, g);
    dy.head<4>() = qd.vec();
    dy.tail<4>() = mass_matrix(kc, q).ldlt().solve(-c + g + u);
  };

  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = t0 + dt * static_cast<double>(i);
  Eigen::Matrix<double, 8, 1> y0;
  y0 << x0.q.vec(), x0.qd.vec();
  std::vector<Eigen::Matrix<double, 8, 1>> samples;
  Dopri5<8> ode;
  ode.integrate(rhs, t0, y0, ts.back(), ts, &samples, ts);

  out.q_pelvis.resize(n);
  out.q_thigh.resize(n);
  out.q_shank.resize(n);
  out.q_foot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.q_pelvis[i] = samples[i][0];
    out.q_thigh[i] = samples[i][1];
    out.q_shank[i] = samples[i][2];
    out.q_foot[i] = samples[i][3];
  }
  return out;
}

void add_measurement_noise(Trajectory& tr, Rng& rng, double peak_to_peak) {
  const double h = 0.5 * peak_to_peak;
  std::vector<double>* chans[4] = {&tr.q_pelvis, &tr.q_thigh, &tr.q_shank, &tr.q_foot};
  for (auto* ch : chans)
    for (double& v : *ch) v += rng.uniform(-h, h);
}

Scenario Scenario::from_config(const Config& cfg, const std::string& base_dir) {
  Scenario sc;
  sc.model = BodyModel::from_config(cfg);

  std::filesystem::path ff(cfg.get_string("scenario.feedforward"));
  if (ff.is_relative()) ff = std::filesystem::path(base_dir) / ff;
  sc.u_ff = FeedForward::from_csv(ff.string());

  sc.x0.q = {cfg.get_double("scenario.x0.q_pelvis"), cfg.get_double("scenario.x0.q_thigh"),
             cfg.get_double("scenario.x0.q_shank"), cfg.get_double("scenario.x0.q_foot")};
  sc.x0.qd = {cfg.get_double("scenario.x0.qd_pelvis"),
              cfg.get_double("scenario.x0.qd_thigh"),
              cfg.get_double("scenario.x0.qd_shank"),
              cfg.get_double("scenario.x0.qd_foot")};
  sc.pelvis_offset = cfg.get_double("scenario.pelvis.offset");
  sc.pelvis_amp = cfg.get_double("scenario.pelvis.amp");
  sc.pelvis_period = cfg.get_double("scenario.pelvis.period");
  sc.pulse.onset = cfg.get_double("scenario.pulse.onset");
  sc.pulse.width = cfg.get_double("scenario.pulse.width");
  sc.pulse.amp_x = cfg.get_double("scenario.pulse.amp_x");
  sc.pulse.amp_y = cfg.get_double("scenario.pulse.amp_y", 0.0);
  sc.noise_p2p = cfg.get_double("scenario.noise_p2p", 0.01);
  if (sc.noise_p2p < 0.0)
    throw ValidationError("scenario: noise_p2p must be >= 0");
  if (sc.pelvis_period <= 0.0)
    throw ValidationError("scenario: pelvis.period must be positive");
  if (sc.pulse.width <= 0.0 || sc.pulse.onset < 0.0)
    throw ValidationError("scenario: pulse must have onset >= 0 and width > 0");
  return sc;
}

void Scenario::to_config(Config& cfg, const std::string& feedforward_path) const {
  model.to_config(cfg);
  cfg.set("scenario.feedforward", feedforward_path);
  cfg.set_double("scenario.x0.q_pelvis", x0.q.pelvis);
  cfg.set_double("scenario.x0.q_thigh", x0.q.thigh);
  cfg.set_double("scenario.x0.q_shank", x0.q.shank);
  cfg.set_double("scenario.x0.q_foot", x0.q.foot);
  cfg.set_double("scenario.x0.qd_pelvis", x0.qd.pelvis);
  cfg.set_double("scenario.x0.qd_thigh", x0.qd.thigh);
  cfg.set_double("scenario.x0.qd_shank", x0.qd.shank);
  cfg.set_double("scenario.x0.qd_foot", x0.qd.foot);
  cfg.set_double("scenario.pelvis.offset", pelvis_offset);
  cfg.set_double("scenario.pelvis.amp", pelvis_amp);
  cfg.set_double("scenario.pelvis.period", pelvis_period);
  cfg.set_double("scenario.pulse.onset", pulse.onset);
  cfg.set_double("scenario.pulse.width", pulse.width);
  cfg.set_double("scenario.pulse.amp_x", pulse.amp_x);
  cfg.set_double("scenario.pulse.amp_y", pulse.amp_y);
  cfg.set_double("scenario.noise_p2p", noise_p2p);
}

std::vector<double> Scenario::pelvis_series() const {
  const std::size_t n = u_ff.samples();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = u_ff.t0 + u_ff.dt * static_cast<double>(i);
    s[i] = pelvis_offset + pelvis_amp * std::sin(2.0 * M_PI * t / pelvis_period);
  }
  return s;
}

Trajectory Scenario::build_unperturbed() const {
  return simulate_recording(model, u_ff, x0, pelvis_series(), nullptr, nullptr, {});
}

Trajectory Scenario::build_perturbed(const Trajectory& unperturbed,
                                     const ImpedanceParams& truth) const {
  return simulate_recording(model, u_ff, x0, pelvis_series(), &truth, &unperturbed,
                            pulse);
}

std::vector<ImpedanceParams> validation_grid(bool full) {
  static const double kLevels[3] = {0.0, 75.0, 150.0};
  static const double dLevels[3] = {0.0, 2.0, 4.0};
  std::vector<ImpedanceParams> grid;
  if (full) {
    grid.reserve(729);
    for (int idx = 0; idx < 729; ++idx) {
      int rem = idx;
      int digit[6];
      for (int p = 5; p >= 0; --p) {
        digit[p] = rem % 3;
        rem /= 3;
      }
      grid.push_back({{kLevels[digit[0]], kLevels[digit[1]], kLevels[digit[2]]},
                      {dLevels[digit[3]], dLevels[digit[4]], dLevels[digit[5]]}});
    }
  } else {
    grid.reserve(27);
    for (int j0 = 0; j0 < 3; ++j0)
      for (int j1 = 0; j1 < 3; ++j1)
        for (int j2 = 0; j2 < 3; ++j2)
          grid.push_back({{kLevels[j0], kLevels[j1], kLevels[j2]},
                          {dLevels[j0], dLevels[j1], dLevels[j2]}});
  }
  return grid;
}

std::array<ErrorStats, 6> compute_error_stats(const std::vector<ComboResult>& combos) {
  std::array<ErrorStats, 6> stats{};
  for (int p = 0; p < 6; ++p) {
    std::vector<double> errs;
    errs.reserve(combos.size());
    for (const ComboResult& c : combos)
      errs.push_back(c.est.as_vector()[p] - c.truth.as_vector()[p]);
    if (errs.empty()) continue;
    ErrorStats& s = stats[static_cast<std::size_t>(p)];
    s.min = *std::min_element(errs.begin(), errs.end());
    s.max = *std::max_element(errs.begin(), errs.end());
    s.mean = mean(errs);
    s.stddev = errs.size() > 1 ? stddev(errs) : 0.0;
  }
  return stats;
}

SweepResult run_validation(const Scenario& scenario, const SweepOptions& opts) {
  const Trajectory unpert = scenario.build_unperturbed();
  std::vector<ImpedanceParams> grid = validation_grid(opts.full);
  if (opts.max_combos > 0 &&
      static_cast<std::size_t>(opts.max_combos) < grid.size())
    grid.resize(static_cast<std::size_t>(opts.max_combos));

  SweepResult result;
  result.combos.resize(grid.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
      try {
        const ImpedanceParams& truth = grid[i];
        const Trajectory pert = scenario.build_perturbed(unpert, truth);
        const std::uint64_t combo_seed = derive_seed(opts.seed, static_cast<std::uint64_t>(i));

        IdentOptions io = opts.ident;
        io.seed = derive_seed(combo_seed, 1);
        io.threads = 1;

        IdentResult r;
        if (opts.noisy) {
          Trajectory u = unpert, p = pert;
          Rng rng(derive_seed(combo_seed, 0));
          add_measurement_noise(u, rng, scenario.noise_p2p);
          add_measurement_noise(p, rng, scenario.noise_p2p);
          r = IdentProblem(scenario.model, u, p, scenario.pulse.onset, io).identify();
        } else {
          r = IdentProblem(scenario.model, unpert, pert, scenario.pulse.onset, io)
                  .identify();
        }

        ComboResult& c = result.combos[i];
        c.index = static_cast<int>(i);
        c.truth = truth;
        c.est = r.params;
        c.cost = r.cost;
        c.rmse = r.rmse;
        c.vaf = r.vaf;
        c.n_converged = r.n_converged;
        c.best_start = r.best_start;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(opts.threads, static_cast<int>(grid.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  result.stats = compute_error_stats(result.combos);
  return result;
}

namespace {

const char* kParamNames[6] = {"k_hip", "k_knee", "k_ankle", "d_hip", "d_knee", "d_ankle"};

}  // namespace

void write_combos_csv(const std::string& path, const SweepResult& result) {
  CsvTable t;
  t.header = {"index"};
  for (const char* suffix : {"_true", "_est", "_err"})
    for (const char* p : kParamNames) t.header.push_back(std::string(p) + suffix);
  for (const char* name : {"cost", "rmse", "vaf_hip", "vaf_knee", "vaf_ankle",
                           "n_converged", "best_start"})
    t.header.emplace_back(name);

  t.cols.assign(t.header.size(), {});
  for (const ComboResult& c : result.combos) {
    std::size_t j = 0;
    t.cols[j++].push_back(c.index);
    const auto tv = c.truth.as_vector(), ev = c.est.as_vector();
    for (int p = 0; p < 6; ++p) t.cols[j++].push_back(tv[p]);
    for (int p = 0; p < 6; ++p) t.cols[j++].push_back(ev[p]);
    for (int p = 0; p < 6; ++p) t.cols[j++].push_back(ev[p] - tv[p]);
    t.cols[j++].push_back(c.cost);
    t.cols[j++].push_back(c.rmse);
    t.cols[j++].push_back(c.vaf.hip);
    t.cols[j++].push_back(c.vaf.knee);
    t.cols[j++].push_back(c.vaf.ankle);
    t.cols[j++].push_back(c.n_converged);
    t.cols[j++].push_back(c.best_start);
  }
  write_csv(path, t);
}

void write_stats_csv(const std::string& path, const SweepResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "stat";
  for (const char* p : kParamNames) out << ',' << p;
  out << '\n';
  const char* rows[4] = {"min", "max", "std", "mean"};
  for (int r = 0; r < 4; ++r) {
    out << rows[r];
    for (const auto& s : result.stats) {
      const double v = r == 0 ? s.min : r == 1 ? s.max : r == 2 ? s.stddev : s.mean;
      out << ',' << fmt_num(v);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace swingid
