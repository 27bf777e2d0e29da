// End-to-end acceptance checks. Each check prints exactly one PASS/FAIL line
// and the process exits nonzero when any of them fails. --full widens the
// identification sweep from the 27-combination smoke subset to the full
// 3^6 grid; --only N runs a single check while iterating on it.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "swingid/config.hpp"
#include "swingid/ctrl.hpp"
#include "swingid/dynamics.hpp"
#include "swingid/gait.hpp"
#include "swingid/ident.hpp"
#include "swingid/model.hpp"
#include "swingid/ode.hpp"
#include "swingid/rng.hpp"
#include "swingid/spectral.hpp"
#include "swingid/synthval.hpp"
#include "swingid/trajectory.hpp"
#include "test_support.hpp"

using namespace swingid;
namespace fs = std::filesystem;

namespace {

const std::string kSrc = SWINGID_SOURCE_DIR;
const std::string kCli = SWINGID_CLI_PATH;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Result {
  bool pass = true;
  std::string summary;
  std::vector<std::string> bad;

  void expect(bool ok, std::string what) {
    if (!ok) {
      pass = false;
      bad.push_back(std::move(what));
    }
  }
};

Scenario load_scenario() {
  const std::string dir = kSrc + "/data/validation";
  return Scenario::from_config(Config::from_file(dir + "/scenario.cfg"), dir);
}

// 1. Noise-free sweep: every grid combination recovered within the brackets.
Result noise_free_grid(bool full) {
  Result r;
  SweepOptions opts;
  opts.full = full;
  opts.noisy = false;
  opts.seed = 1;
  const SweepResult res = run_validation(load_scenario(), opts);

  double kerr = 0.0, derr = 0.0;
  int unconverged = 0;
  for (const ComboResult& c : res.combos) {
    const auto e = (c.est.as_vector() - c.truth.as_vector()).cwiseAbs().eval();
    kerr = std::max({kerr, e[0], e[1], e[2]});
    derr = std::max({derr, e[3], e[4], e[5]});
    if (c.n_converged < 1) ++unconverged;
  }
  r.expect(unconverged == 0,
           std::to_string(unconverged) + " combinations had no converged start");
  r.expect(kerr <= 1.0, "max |K error| " + fmt(kerr) + " N m/rad exceeds 1");
  r.expect(derr <= 0.1, "max |D error| " + fmt(derr) + " N m s/rad exceeds 0.1");
  r.summary = std::to_string(res.combos.size()) + " combinations, max |K err| " +
              fmt(kerr) + " N m/rad, max |D err| " + fmt(derr) + " N m s/rad";
  return r;
}

// 2. Noisy sweep: ankle stiffness is much less identifiable than knee
// stiffness, while hip/knee damping stay tight.
Result noisy_reliability_pattern() {
  Result r;
  SweepOptions opts;
  opts.noisy = true;
  opts.seed = 1;
  const SweepResult res = run_validation(load_scenario(), opts);

  const auto& st = res.stats;  // k.hip, k.knee, k.ankle, d.hip, d.knee, d.ankle
  const double ratio = st[2].stddev / st[1].stddev;
  r.expect(ratio >= 5.0,
           "ankle/knee stiffness error-spread ratio " + fmt(ratio) + " below 5");
  r.expect(st[3].stddev < 0.5,
           "hip damping error std " + fmt(st[3].stddev) + " not below 0.5");
  r.expect(st[4].stddev < 0.5,
           "knee damping error std " + fmt(st[4].stddev) + " not below 0.5");
  r.summary = "std(K err) knee " + fmt(st[1].stddev) + " vs ankle " +
              fmt(st[2].stddev) + " (ratio " + fmt(ratio) + "); std(D err) hip " +
              fmt(st[3].stddev) + ", knee " + fmt(st[4].stddev);
  return r;
}

// 3. Feedforward recovered by inverse dynamics drives the forward simulation
// back onto the source motion in every analysis-length window, and the fit
// on the shipped noise-free recording pair explains the response.
Result round_trip() {
  Result r;
  const Scenario sc = load_scenario();
  const Trajectory src = sc.build_unperturbed();
  const FeedForward u_ff = inverse_dynamics(sc.model, src);

  double worst = 0.0;
  int windows = 0;
  for (std::size_t i0 = 0;; i0 += 4) {
    const double tb = src.time_at(i0);
    const double te = tb + 0.250;
    if (te > src.t_end() + 1e-9) break;
    const SimResult sim =
        simulate(sc.model, u_ff, ImpedanceParams{}, src, nullptr, {tb, te});
    double se[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < sim.samples(); ++i) {
      const JointVec a = sim.joint_ang[i];
      const JointVec b = src.joint_angles_at(src.index_near(sim.t[i]));
      se[0] += (a.hip - b.hip) * (a.hip - b.hip);
      se[1] += (a.knee - b.knee) * (a.knee - b.knee);
      se[2] += (a.ankle - b.ankle) * (a.ankle - b.ankle);
    }
    for (double s : se)
      worst = std::max(worst, std::sqrt(s / static_cast<double>(sim.samples())));
    ++windows;
  }
  r.expect(windows >= 10, "only " + std::to_string(windows) + " windows fit the record");
  r.expect(worst < 1e-3,
           "worst per-window joint-angle RMS " + fmt(worst) + " rad reaches 1e-3");

  const Config trial = Config::from_file(kSrc + "/data/ident/trial.cfg");
  IdentOptions opts;
  opts.n_starts = 2;
  opts.seed = 5;
  IdentProblem prob(BodyModel::from_config(trial),
                    Trajectory::from_csv(kSrc + "/data/ident/unperturbed.csv"),
                    Trajectory::from_csv(kSrc + "/data/ident/perturbed.csv"),
                    trial.get_double("identify.onset"), opts);
  const IdentResult fit = prob.identify();
  const double vaf_min = std::min({fit.vaf.hip, fit.vaf.knee, fit.vaf.ankle});
  r.expect(vaf_min >= 99.9, "min per-joint VAF " + fmt(vaf_min) + "% below 99.9%");
  r.summary = std::to_string(windows) + " windows, worst joint RMS " + fmt(worst) +
              " rad; min VAF " + fmt(vaf_min) + "%";
  return r;
}

// 4. Rigid-body invariants: mass-matrix symmetry and positive definiteness,
// energy conservation of the unforced chain, interaction Jacobian vs finite
// differences.
Result dynamics_invariants() {
  Result r;
  const BodyModel m = testutil::reference_model();
  const DynConstants kc(m);
  Rng rng(2024);

  double sym = 0.0;
  int not_pd = 0;
  for (int i = 0; i < 1000; ++i) {
    const GenCoord q = testutil::random_coord(rng);
    const Mat4 M = mass_matrix(kc, q);
    sym = std::max(sym,
                   (M - M.transpose()).cwiseAbs().maxCoeff() / M.cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Mat4> es(M);
    if (es.eigenvalues().minCoeff() <= 0.0) ++not_pd;
  }
  r.expect(sym <= 1e-12, "mass-matrix asymmetry " + fmt(sym) + " above 1e-12");
  r.expect(not_pd == 0,
           std::to_string(not_pd) + " of 1000 mass matrices not positive definite");

  Dopri5<8> ode;
  auto f = [&](double, const Eigen::Matrix<double, 8, 1>& y,
               Eigen::Matrix<double, 8, 1>& dy) {
    const GenCoord q{y[0], y[1], y[2], y[3]};
    const GenCoord qd{y[4], y[5], y[6], y[7]};
    Vec4 c, g;
    bias_forces(kc, q, qd, c, g);
    dy.head<4>() = qd.vec();
    dy.tail<4>() = mass_matrix(kc, q).ldlt().solve(-c + g);
  };
  double drift = 0.0;
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
      const State s{GenCoord{y[0], y[1], y[2], y[3]}, GenCoord{y[4], y[5], y[6], y[7]}};
      const double e = kinetic_energy(m, s) + potential_energy(m, s.q);
      drift = std::max(drift, std::abs(e - e0) / std::max(1.0, std::abs(e0)));
    }
  }
  r.expect(drift < 1e-6, "unforced energy drift " + fmt(drift) + " reaches 1e-6");

  double jerr = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const GenCoord q = testutil::random_coord(rng);
    const Eigen::Matrix<double, 2, 4> J = interaction_jacobian(m, q);
    for (int c = 0; c < 4; ++c) {
      Vec4 qp = q.vec(), qm = q.vec();
      qp[c] += h;
      qm[c] -= h;
      const Vec2 fd = (interaction_point(m, GenCoord::from_vec(qp)) -
                       interaction_point(m, GenCoord::from_vec(qm))) /
                      (2.0 * h);
      jerr = std::max(jerr, (fd - J.col(c)).cwiseAbs().maxCoeff());
    }
  }
  r.expect(jerr < 1e-6, "Jacobian vs finite differences " + fmt(jerr) + " reaches 1e-6");
  r.summary = "asymmetry " + fmt(sym) + ", energy drift " + fmt(drift) +
              ", Jacobian error " + fmt(jerr);
  return r;
}

// 5. Force controller on the default plant: stable under an hour-long-scale
// noise profile is overkill, 60 s suffices; bandwidth and step bands.
Result controller_bands() {
  Result r;
  const ControllerParams params;
  const PvaLimits limits;
  const PlantModel plant;
  const double fs = params.fs;

  std::vector<double> profile(static_cast<std::size_t>(60.0 * fs));
  Rng rng(17);
  LowPass2 shape(60.0, fs);
  for (double& v : profile) v = shape.step(rng.uniform(-1.0, 1.0));
  const auto [lo, hi] = std::minmax_element(profile.begin(), profile.end());
  const double mid = 0.5 * (*lo + *hi), span = *hi - *lo;
  for (double& v : profile) v = (v - mid) * (60.0 / span);

  const LoopTraces noise = simulate_loop(params, limits, plant, profile);
  double fmax = 0.0;
  for (double v : noise.f_measured) fmax = std::max(fmax, std::abs(v));
  r.expect(fmax < 300.0, "noise-response peak " + fmt(fmax) + " N not bounded");
  const FrfResult frf = frf_welch(noise.f_filtered, noise.f_measured, fs);
  r.expect(std::isfinite(frf.bandwidth_hz) && frf.bandwidth_hz >= 20.0,
           "closed-loop bandwidth " + fmt(frf.bandwidth_hz) + " Hz below 20");

  const std::vector<double> step(static_cast<std::size_t>(3.0 * fs), 40.0);
  const LoopTraces st = simulate_loop(params, limits, plant, step);
  const StepMetrics sm = step_metrics(st.f_measured, 1.0 / fs);
  r.expect(sm.steady_state >= 0.85 * 40.0 && sm.steady_state <= 0.95 * 40.0,
           "step steady state " + fmt(sm.steady_state) + " N outside 85..95% of 40");
  r.expect(sm.rise_time >= 5e-3 && sm.rise_time <= 20e-3,
           "rise time " + fmt(sm.rise_time * 1e3) + " ms outside 5..20");
  r.expect(sm.overshoot_pct >= 10.0 && sm.overshoot_pct <= 50.0,
           "overshoot " + fmt(sm.overshoot_pct) + "% outside 10..50");
  r.summary = "bandwidth " + fmt(frf.bandwidth_hz) + " Hz; step " +
              fmt(sm.steady_state) + " N, rise " + fmt(sm.rise_time * 1e3) +
              " ms, overshoot " + fmt(sm.overshoot_pct) + "%";
  return r;
}

// 6. Safety limiter: three worked examples hold exactly, and a large random
// fuzz never leaves the position/velocity/acceleration envelope.
Result limiter_envelope() {
  Result r;
  const PvaLimits lim;
  const double dt = 1e-3;

  double v = 0.0, p = 0.0;
  for (int i = 0; i < 20; ++i) {
    v = pva_limit(lim, 100.0, p, v, dt);
    p += v * dt;
  }
  r.expect(v == lim.vel, "ramp does not saturate exactly at the velocity bound");

  r.expect(pva_limit(lim, 3.0, lim.pos, 0.0, dt) == 0.0,
           "outward command at the position bound not refused exactly");
  r.expect(pva_limit(lim, -3.0, lim.pos, 0.0, dt) < 0.0,
           "return toward range blocked at the position bound");

  const double d = 0.02;
  const double vkeep = pva_limit(lim, lim.vel, lim.pos - d, 4.0, dt);
  r.expect(std::abs(vkeep - 4.0) <= 1e-12,
           "matched approach speed " + fmt(vkeep) + " not held at 4.0");
  r.expect(vkeep <= std::sqrt(2.0 * lim.acc * d) + 1e-12,
           "approach speed exceeds the stopping rule");

  Rng rng(9001);
  long violations = 0;
  const int n_seqs = 1000000, n_steps = 32;
  for (int s = 0; s < n_seqs; ++s) {
    double pos = rng.uniform(-lim.pos, lim.pos), vel = 0.0;
    for (int i = 0; i < n_steps; ++i) {
      double cmd = rng.uniform(-12.0, 12.0);
      if ((rng.bits() & 7u) == 0) cmd *= 10.0;
      const double vn = pva_limit(lim, cmd, pos, vel, dt);
      if (std::abs(vn) > lim.vel + 1e-9) ++violations;
      if (std::abs(vn - vel) > lim.acc * dt + 1e-9) ++violations;
      pos += vn * dt;
      vel = vn;
      if (std::abs(pos) > lim.pos + 1e-9) ++violations;
    }
  }
  r.expect(violations == 0, std::to_string(violations) + " envelope violations");
  r.summary = "10^6 random sequences, 0 violations; worked examples exact";
  return r;
}

// 7. Gait pipeline: exact events on the shipped treadmill fixture, exact
// outlier classification on a constructed ensemble, and the transparency
// verdict with its fixture-encoded hip numbers.
Result gait_pipeline() {
  Result r;
  const GaitRecording ref_rec =
      GaitRecording::from_csv(kSrc + "/data/gait/no_device.csv");
  const GaitEvents ev = detect_events(ref_rec.grf, ref_rec.fs());
  std::vector<std::size_t> hs_want, to_want;
  for (std::size_t i = 1000; i <= 13000; i += 1000) hs_want.push_back(i);
  for (std::size_t i = 600; i <= 13600; i += 1000) to_want.push_back(i);
  r.expect(ev.heel_strikes == hs_want, "heel-strike indices off the stance grid");
  r.expect(ev.toe_offs == to_want, "toe-off indices off the stance grid");

  const std::size_t n = 100;
  auto make_stride = [&](double off, std::size_t bad_pts) {
    NormalizedStride s;
    s.hip.resize(n);
    s.knee.resize(n);
    s.ankle.resize(n);
    s.force_x.assign(n, 0.0);
    s.force_y.assign(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      const double base = std::sin(2.0 * M_PI * static_cast<double>(p) / n);
      s.hip[p] = base + off + (p < bad_pts ? 1.0 : 0.0);
      s.knee[p] = 0.5 * base + off;
      s.ankle[p] = 0.25 * base + off;
    }
    return s;
  };
  StrideEnsemble ens;
  ens.n_points = n;
  for (int i = 0; i < 12; ++i) ens.strides.push_back(make_stride(0.001 * i, 0));
  ens.strides.push_back(make_stride(0.0055, 60));  // exactly the allowed fraction
  ens.strides.push_back(make_stride(0.0055, 61));  // one point beyond it
  const OutlierPartition part = outlier_filter(ens, 0.20);
  r.expect(part.discarded == std::vector<std::size_t>{13},
           "constructed outlier stride not the single discard");
  r.expect(part.kept.size() == 13, "keeper strides were discarded");

  auto pipeline = [](const std::string& path, std::vector<double>* fmag) {
    GaitRecording rec = GaitRecording::from_csv(path);
    filter_forces(rec);
    const GaitEvents events = detect_events(rec.grf, rec.fs());
    const std::vector<Stride> strides = cut_strides(rec, events, Leg::Left);
    std::vector<Stride> unpert;
    for (const Stride& s : strides)
      if (!s.perturbed) unpert.push_back(s);
    const StrideEnsemble all = normalize_strides(unpert, 500);
    const OutlierPartition keep = outlier_filter(all, 0.20);
    StrideEnsemble kept;
    kept.n_points = all.n_points;
    for (std::size_t i : keep.kept) kept.strides.push_back(all.strides[i]);
    if (fmag) {
      fmag->resize(rec.samples());
      for (std::size_t i = 0; i < rec.samples(); ++i)
        (*fmag)[i] = std::hypot(rec.force_x[i], rec.force_y[i]);
    }
    return kept;
  };
  std::vector<double> fmag;
  const StrideEnsemble base = pipeline(kSrc + "/data/gait/no_device.csv", nullptr);
  const StrideEnsemble dev = pipeline(kSrc + "/data/gait/min_impedance.csv", &fmag);
  const TransparencyReport rep = transparency_metrics(base, dev, fmag);

  const struct {
    const JointTransparency* j;
    double rmse, isv;
    const char* name;
  } want[] = {{&rep.hip, 0.030, 0.047, "hip"},
              {&rep.knee, 0.052, 0.086, "knee"},
              {&rep.ankle, 0.026, 0.048, "ankle"}};
  for (const auto& w : want) {
    r.expect(std::abs(w.j->rmse - w.rmse) < 5e-4,
             std::string(w.name) + " deviation " + fmt(w.j->rmse) + " rad, fixture " +
                 fmt(w.rmse));
    r.expect(std::abs(w.j->isv - w.isv) < 5e-4,
             std::string(w.name) + " variability " + fmt(w.j->isv) + " rad, fixture " +
                 fmt(w.isv));
    r.expect(w.j->pass, std::string(w.name) + " fails its own variability bound");
  }
  r.summary = "events exact; outliers exact; hip " + fmt(rep.hip.rmse) + " vs " +
              fmt(rep.hip.isv) + " rad, all joints transparent";
  return r;
}

// 8. Spectral estimator against an analytic discrete one-pole low-pass whose
// -3 dB point sits exactly at 25 Hz by prewarping.
Result spectral_oracle() {
  Result r;
  const double fs = 1000.0, fc = 25.0;
  const double wa = std::tan(M_PI * fc / fs);
  Rng rng(7);
  std::vector<double> x(60000), y(x.size());
  double x1 = 0.0, y1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform(-1.0, 1.0);
    y[i] = (wa * (x[i] + x1) + (1.0 - wa) * y1) / (1.0 + wa);
    x1 = x[i];
    y1 = y[i];
  }
  const FrfResult res = frf_welch(x, y, fs);
  r.expect(std::abs(res.bandwidth_hz - fc) <= 0.10 * fc,
           "bandwidth " + fmt(res.bandwidth_hz) + " Hz more than 10% from 25");

  auto analytic = [&](double f) {
    const std::complex<double> zi = std::polar(1.0, -2.0 * M_PI * f / fs);
    return std::abs(wa * (1.0 + zi) / ((1.0 + wa) - (1.0 - wa) * zi));
  };
  double worst_db = 0.0;
  for (std::size_t b = 3; b < res.h.size() && res.freq[b] <= 200.0; b += 11) {
    const double est_db = 20.0 * std::log10(std::abs(res.h[b]));
    const double ref_db = 20.0 * std::log10(analytic(res.freq[b]));
    worst_db = std::max(worst_db, std::abs(est_db - ref_db));
  }
  r.expect(worst_db < 1.0, "magnitude off by " + fmt(worst_db) + " dB");
  r.summary = "bandwidth " + fmt(res.bandwidth_hz) + " Hz (true 25), worst magnitude error " +
              fmt(worst_db) + " dB";
  return r;
}

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

// 9. Every subcommand rerun from its manifest reproduces its outputs byte for
// byte, checked through the report subcommand itself.
Result rerun_determinism() {
  Result r;
  const fs::path tmp = fs::temp_directory_path() / "swingid-acceptance";
  std::error_code ec;
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp);

  Config vcfg = Config::from_file(kSrc + "/data/validation/scenario.cfg");
  vcfg.set("scenario.feedforward", kSrc + "/data/validation/feedforward.csv");
  vcfg.set_int("validate.max_combos", 2);
  vcfg.set_int("identify.n_starts", 4);
  std::ofstream(tmp / "validate.cfg") << vcfg.serialize();

  Config ccfg;
  ccfg.set("profile.kind", "step");
  ccfg.set_double("profile.duration", 0.6);
  std::ofstream(tmp / "controller.cfg") << ccfg.serialize();

  struct Run {
    const char* name;
    std::string args;
  };
  const std::vector<Run> runs = {
      {"preprocess",
       "preprocess " + quoted(kSrc + "/data/gait/perturbed_walk.csv")},
      {"identify", "identify " + quoted(kSrc + "/data/ident/perturbed.csv") + " " +
                       quoted(kSrc + "/data/ident/unperturbed.csv") + " --config " +
                       quoted(kSrc + "/data/ident/trial.cfg") + " --seed 3"},
      {"validate", "validate --config " + quoted(tmp / "validate.cfg") + " --seed 2"},
      {"simulate-controller",
       "simulate-controller --config " + quoted(tmp / "controller.cfg")},
  };
  for (const Run& run : runs) {
    const fs::path d1 = tmp / (std::string(run.name) + "-run");
    const fs::path d2 = tmp / (std::string(run.name) + "-rerun");
    const int rc1 = run_cli(run.args + " --out " + quoted(d1));
    r.expect(rc1 == 0, std::string(run.name) + " exited " + std::to_string(rc1));
    if (rc1 != 0) continue;
    const int rc2 = run_cli("report " + quoted(d1) + " --rerun --out " + quoted(d2));
    r.expect(rc2 == 0, std::string(run.name) +
                           " rerun not byte-identical (report exited " +
                           std::to_string(rc2) + ")");
  }
  r.summary = "4 subcommands re-executed from their manifests, outputs identical";
  if (r.pass) fs::remove_all(tmp, ec);  // keep the directories when debugging a failure
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  bool full = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--full") {
      full = true;
    } else if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--full] [--only N]\n", argv[0]);
      return 2;
    }
  }

  struct Criterion {
    const char* name;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria = {
      {"noise-free identification recovers every grid combination",
       [&] { return noise_free_grid(full); }},
      {"noisy identification reproduces the reliability ordering",
       noisy_reliability_pattern},
      {"inverse/forward dynamics round trip and noise-free fit quality", round_trip},
      {"rigid-body dynamics invariants", dynamics_invariants},
      {"force controller meets bandwidth and step-response bands", controller_bands},
      {"safety limiter envelope holds under fuzzing, worked examples exact",
       limiter_envelope},
      {"gait pipeline events, outlier rejection and transparency", gait_pipeline},
      {"spectral estimator recovers an analytic filter", spectral_oracle},
      {"every subcommand reruns byte-identically from its manifest",
       rerun_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Result res;
    try {
      res = criteria[i].run();
    } catch (const std::exception& e) {
      res.pass = false;
      res.bad = {std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string note;
    if (res.pass) {
      note = res.summary;
    } else {
      for (std::size_t b = 0; b < res.bad.size(); ++b)
        note += (b ? "; " : "") + res.bad[b];
    }
    std::printf("%s %zu. %s: %s [%.1f s]\n", res.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, note.c_str(), secs);
    std::fflush(stdout);
    if (!res.pass) ++failures;
  }
  if (only == 0) {
    if (failures == 0)
      std::printf("all %zu criteria passed\n", criteria.size());
    else
      std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
  }
  return failures == 0 ? 0 : 1;
}
