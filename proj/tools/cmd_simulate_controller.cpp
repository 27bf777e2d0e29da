#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "cli_common.hpp"
#include "swingid/csv.hpp"
#include "swingid/ctrl.hpp"
#include "swingid/errors.hpp"
#include "swingid/rng.hpp"
#include "swingid/spectral.hpp"

using namespace swingid;

namespace {

// Band-limited noise: uniform white noise through a second-order low-pass,
// rescaled to the requested peak-to-peak amplitude.
std::vector<double> noise_profile(std::size_t n, double fs, double cutoff,
                                  double peak_to_peak, std::uint64_t seed) {
  Rng rng(seed);
  LowPass2 shape(cutoff, fs);
  std::vector<double> u(n);
  for (auto& v : u) v = shape.step(rng.uniform(-1.0, 1.0));
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  const double span = *hi - *lo;
  if (span <= 0.0) throw AnalysisError("noise profile collapsed to a constant");
  const double mid = 0.5 * (*hi + *lo);
  for (auto& v : u) v = (v - mid) / span * peak_to_peak;
  return u;
}

void write_traces(const std::string& path, const LoopTraces& tr) {
  CsvTable t;
  t.header = {"t", "f_desired", "f_filtered", "f_measured", "vel_desired",
              "vel_command", "motor_angle", "motor_vel", "leg_angle", "limited"};
  t.cols.assign(t.header.size(), {});
  for (std::size_t i = 0; i < tr.samples(); ++i) {
    t.cols[0].push_back(tr.dt * static_cast<double>(i));
    t.cols[1].push_back(tr.f_desired[i]);
    t.cols[2].push_back(tr.f_filtered[i]);
    t.cols[3].push_back(tr.f_measured[i]);
    t.cols[4].push_back(tr.vel_desired[i]);
    t.cols[5].push_back(tr.vel_command[i]);
    t.cols[6].push_back(tr.motor_angle[i]);
    t.cols[7].push_back(tr.motor_vel[i]);
    t.cols[8].push_back(tr.leg_angle[i]);
    t.cols[9].push_back(tr.limited[i] ? 1.0 : 0.0);
  }
  write_csv(path, t);
}

void write_frf(const std::string& path, const FrfResult& r) {
  CsvTable t;
  t.header = {"freq", "mag", "phase", "coherence"};
  t.cols.assign(4, {});
  for (std::size_t b = 0; b < r.freq.size(); ++b) {
    t.cols[0].push_back(r.freq[b]);
    t.cols[1].push_back(std::abs(r.h[b]));
    t.cols[2].push_back(std::arg(r.h[b]));
    t.cols[3].push_back(r.coherence[b]);
  }
  write_csv(path, t);
}

}  // namespace

int cmd_simulate_controller(const CliArgs& args) {
  if (!args.inputs.empty())
    throw ValidationError("simulate-controller takes no positional inputs");
  const Config cfg = load_config(args);
  ensure_out_dir(args.out);
  const std::filesystem::path out(args.out);

  const ControllerParams params = ControllerParams::from_config(cfg);
  const PvaLimits limits = PvaLimits::from_config(cfg);
  const PlantModel plant = PlantModel::from_config(cfg);

  const std::string kind = cfg.get_string("profile.kind", "step");
  if (kind != "step" && kind != "noise")
    throw ConfigError("profile.kind must be 'step' or 'noise', got '" + kind + "'");
  const double amplitude = cfg.get_double("profile.amplitude", 40.0);
  const double duration =
      cfg.get_double("profile.duration", kind == "step" ? 3.0 : 60.0);
  if (duration <= 0.0) throw ConfigError("profile.duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration * params.fs));

  std::vector<double> f_desired;
  if (kind == "step") {
    f_desired.assign(n, amplitude);
  } else {
    f_desired = noise_profile(n, params.fs,
                              cfg.get_double("profile.noise_cutoff", 60.0),
                              amplitude, args.seed);
  }

  const auto substeps = static_cast<int>(cfg.get_int("sim.substeps", 10));
  const LoopTraces tr = simulate_loop(params, limits, plant, f_desired, substeps);
  write_traces((out / "traces.csv").string(), tr);

  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("profile.kind", kind);
  kv.emplace_back("profile.amplitude", fmt_num(amplitude));
  if (kind == "step") {
    const StepMetrics m = step_metrics(tr.f_measured, tr.dt);
    kv.emplace_back("steady_state", fmt_num(m.steady_state));
    kv.emplace_back("steady_state_fraction", fmt_num(m.steady_state / amplitude));
    kv.emplace_back("rise_time", fmt_num(m.rise_time));
    kv.emplace_back("overshoot_pct", fmt_num(m.overshoot_pct));
  } else {
    const FrfResult frf = frf_welch(
        tr.f_filtered, tr.f_measured, params.fs,
        static_cast<std::size_t>(cfg.get_int("frf.window", 5000)),
        static_cast<std::size_t>(cfg.get_int("frf.overlap", 50)));
    write_frf((out / "frf.csv").string(), frf);
    double rms = 0.0, peak = 0.0;
    for (double f : tr.f_measured) {
      rms += f * f;
      peak = std::max(peak, std::abs(f));
    }
    rms = std::sqrt(rms / static_cast<double>(tr.samples()));
    kv.emplace_back("force_rms", fmt_num(rms));
    kv.emplace_back("force_max", fmt_num(peak));
    kv.emplace_back("low_freq_gain", fmt_num(frf.low_freq_gain));
    kv.emplace_back("bandwidth_hz", fmt_num(frf.bandwidth_hz));
  }
  write_report_text((out / "metrics.txt").string(), kv);

  write_manifest(args, cfg, "simulate-controller");
  return 0;
}
