// Generates the data sets shipped under data/: the synthetic validation
// scenario, an identification trial pair, and the gait recordings used by
// the preprocessing pipeline. Deterministic; rerunning reproduces the same
// bytes.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "swingid/config.hpp"
#include "swingid/dynamics.hpp"
#include "swingid/gait.hpp"
#include "swingid/model.hpp"
#include "swingid/signal.hpp"
#include "swingid/synthval.hpp"
#include "swingid/trajectory.hpp"

using namespace swingid;
namespace fs = std::filesystem;

namespace {

BodyModel adult_model() {
  BodyModel m;
  m.thigh = {6.5, 0.12, 0.42, 0.18};
  m.shank = {3.0, 0.05, 0.43, 0.186};
  m.foot = {0.95, 0.0086, 0.20, 0.10};
  m.cart_mass = 54.55;
  m.interaction_offset = 0.36;
  m.validate();
  return m;
}

// Smooth swing movement: minimum-jerk thigh sweep, mid-swing knee flexion,
// ankle dorsiflexion, cart advancing at walking speed.
Trajectory swing_movement(double fs = 128.0, double duration = 0.7) {
  Trajectory tr;
  tr.t0 = 0.0;
  tr.dt = 1.0 / fs;
  const auto n = static_cast<std::size_t>(std::lround(duration * fs)) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = tr.dt * static_cast<double>(i);
    const double tau = t / duration;
    const double s = tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau);
    const double thigh = 0.25 + (-0.42 - 0.25) * s;
    const double knee_flex = 0.5 + 0.3 * std::cos(M_PI * tau) +
                             0.4 * std::sin(M_PI * tau) -
                             0.1 * std::cos(2.0 * M_PI * tau);
    const double shank = thigh + knee_flex;
    const double dorsi =
        -0.175 - 0.125 * std::cos(M_PI * tau) + 0.275 * std::sin(M_PI * tau);
    const double foot = shank - 1.25 - dorsi;
    tr.q_pelvis.push_back(0.5 * t + 0.02 * std::sin(2.0 * M_PI * tau));
    tr.q_thigh.push_back(thigh);
    tr.q_shank.push_back(shank);
    tr.q_foot.push_back(foot);
    tr.pelvis_angle.push_back(0.05 + 0.03 * std::sin(2.0 * M_PI * tau));
    tr.force_x.push_back(0.0);
    tr.force_y.push_back(0.0);
  }
  return tr;
}

// The validation scenario: feedforward recovered from the swing movement by
// inverse dynamics, initial state from its first samples, a 40 N / 100 ms
// pulse starting mid-swing.
Scenario build_scenario() {
  Scenario sc;
  sc.model = adult_model();
  const Trajectory swing = swing_movement();
  sc.u_ff = inverse_dynamics(sc.model, swing);
  sc.x0.q = swing.coord_at(0);
  const GenCoord q1 = swing.coord_at(1);
  sc.x0.qd = {(q1.pelvis - sc.x0.q.pelvis) / swing.dt,
              (q1.thigh - sc.x0.q.thigh) / swing.dt,
              (q1.shank - sc.x0.q.shank) / swing.dt,
              (q1.foot - sc.x0.q.foot) / swing.dt};
  sc.pelvis_offset = 0.05;
  sc.pelvis_amp = 0.03;
  sc.pelvis_period = 0.7;
  sc.pulse = {0.175, 0.100, 40.0, 0.0};
  sc.noise_p2p = 0.01;
  return sc;
}

void write_validation(const fs::path& dir) {
  fs::create_directories(dir);
  const Scenario sc = build_scenario();
  sc.u_ff.to_csv((dir / "feedforward.csv").string());
  Config cfg;
  sc.to_config(cfg, "feedforward.csv");
  std::ofstream out(dir / "scenario.cfg");
  out << cfg.serialize();
}

// Identification trial: the scenario's unperturbed swing plus a perturbed
// response generated with known impedance, written as a trajectory pair.
void write_ident_trial(const fs::path& dir) {
  fs::create_directories(dir);
  const Scenario sc = build_scenario();
  const ImpedanceParams truth{{75.0, 75.0, 75.0}, {2.0, 2.0, 2.0}};
  const Trajectory unperturbed = sc.build_unperturbed();
  const Trajectory perturbed = sc.build_perturbed(unperturbed, truth);
  unperturbed.to_csv((dir / "unperturbed.csv").string());
  perturbed.to_csv((dir / "perturbed.csv").string());

  Config cfg;
  sc.model.to_config(cfg);
  cfg.set_double("identify.onset", sc.pulse.onset);
  std::ofstream out(dir / "trial.cfg");
  out << cfg.serialize();
}

// ---------------------------------------------------------------------------
// Gait recordings. Strides are 1 s at 1000 Hz (600 ms stance, 400 ms swing);
// the GRF is an ideal square wave so event indices are known exactly.

constexpr double kGaitFs = 1000.0;
constexpr std::size_t kPeriod = 1000;
constexpr std::size_t kStanceLen = 600;
constexpr std::size_t kStrides = 12;
// head cycle before the first heel strike + tail after the last
constexpr std::size_t kSamples = (kStrides + 1) * kPeriod + kPeriod;

double base_hip(double p) {
  return 0.30 * std::sin(2.0 * M_PI * p) + 0.10 * std::cos(4.0 * M_PI * p) - 0.05;
}
double base_knee(double p) {
  return 0.45 - 0.40 * std::cos(2.0 * M_PI * p) + 0.12 * std::sin(4.0 * M_PI * p);
}
double base_ankle(double p) {
  return 0.08 * std::sin(2.0 * M_PI * p) - 0.12 * std::cos(2.0 * M_PI * p) + 0.02;
}

// zero-mean stride-to-stride pattern with unit sample standard deviation
std::vector<double> unit_pattern(std::size_t n) {
  std::vector<double> c(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n));
    mean += c[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double& v : c) {
    v -= mean;
    ss += v * v;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  for (double& v : c) v /= sd;
  return c;
}

// mean over the normalized grid of the spread window sin(pi p), resampled
// exactly as the pipeline resamples strides
double window_gain(std::size_t n_points) {
  std::vector<double> w(kPeriod + 1);
  for (std::size_t i = 0; i <= kPeriod; ++i)
    w[i] = std::sin(M_PI * static_cast<double>(i) / static_cast<double>(kPeriod));
  const std::vector<double> wn = resample_uniform(w, n_points);
  double acc = 0.0;
  for (double v : wn) acc += v;
  return acc / static_cast<double>(n_points);
}

struct GaitSpec {
  double isv_hip, isv_knee, isv_ankle;  // 2x mean within-condition std, rad
  double off_hip, off_knee, off_ankle;  // condition mean offset, rad
  bool device_forces = false;
  bool perturb_even_strides = false;
};

GaitRecording build_gait(const GaitSpec& spec) {
  GaitRecording rec;
  rec.t0 = 0.0;
  rec.dt = 1.0 / kGaitFs;
  const std::vector<double> pattern = unit_pattern(kStrides);
  const double gain = window_gain(500);
  const double sd_hip = spec.isv_hip / 2.0 / gain;
  const double sd_knee = spec.isv_knee / 2.0 / gain;
  const double sd_ankle = spec.isv_ankle / 2.0 / gain;

  for (std::size_t i = 0; i < kSamples; ++i) {
    const double t = rec.dt * static_cast<double>(i);
    rec.grf.push_back(i % kPeriod < kStanceLen ? 700.0 : 0.0);

    // stride index: heel strikes sit at multiples of kPeriod from kPeriod on
    double spread = 0.0;
    bool in_stride = false;
    std::size_t stride = 0;
    if (i >= kPeriod && i < (kStrides + 1) * kPeriod) {
      stride = i / kPeriod - 1;
      const double p = static_cast<double>(i % kPeriod) / static_cast<double>(kPeriod);
      spread = pattern[stride] * std::sin(M_PI * p);
      in_stride = true;
    }
    const double p = static_cast<double>(i % kPeriod) / static_cast<double>(kPeriod);

    const double hip = base_hip(p) + spec.off_hip + sd_hip * spread;
    const double knee = base_knee(p) + spec.off_knee + sd_knee * spread;
    const double ankle = base_ankle(p) + spec.off_ankle + sd_ankle * spread;
    rec.hip_l.push_back(hip);
    rec.knee_l.push_back(knee);
    rec.ankle_l.push_back(ankle);
    // contralateral leg: same pattern half a cycle out of phase
    const double pr = std::fmod(p + 0.5, 1.0);
    rec.hip_r.push_back(base_hip(pr));
    rec.knee_r.push_back(base_knee(pr));
    rec.ankle_r.push_back(base_ankle(pr));

    rec.pelvis_angle.push_back(0.04 + 0.02 * std::sin(2.0 * M_PI * p));
    rec.pelvis_x.push_back(1.25 * t);

    if (spec.device_forces) {
      rec.force_x.push_back(2.4 * std::sin(2.0 * M_PI * 1.3 * t) +
                            1.1 * std::sin(2.0 * M_PI * 3.7 * t));
      rec.force_y.push_back(1.6 * std::cos(2.0 * M_PI * 0.9 * t));
    } else {
      rec.force_x.push_back(0.0);
      rec.force_y.push_back(0.0);
    }

    // 20 ms pulse marker 100 ms after toe-off in even strides
    const bool pulse_on = spec.perturb_even_strides && in_stride &&
                          stride % 2 == 0 && i % kPeriod >= kStanceLen + 100 &&
                          i % kPeriod < kStanceLen + 120;
    rec.pert.push_back(pulse_on ? 1.0 : 0.0);
  }
  rec.validate();
  return rec;
}

void write_gait(const fs::path& dir) {
  fs::create_directories(dir);

  GaitSpec no_device;
  no_device.isv_hip = 0.047;
  no_device.isv_knee = 0.086;
  no_device.isv_ankle = 0.048;
  no_device.off_hip = no_device.off_knee = no_device.off_ankle = 0.0;
  build_gait(no_device).to_csv((dir / "no_device.csv").string());

  GaitSpec min_impedance = no_device;
  min_impedance.off_hip = 0.030;
  min_impedance.off_knee = 0.052;
  min_impedance.off_ankle = 0.026;
  min_impedance.device_forces = true;
  build_gait(min_impedance).to_csv((dir / "min_impedance.csv").string());

  GaitSpec perturbed = min_impedance;
  perturbed.perturb_even_strides = true;
  build_gait(perturbed).to_csv((dir / "perturbed_walk.csv").string());
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? argv[1] : "data";
  write_validation(root / "validation");
  write_ident_trial(root / "ident");
  write_gait(root / "gait");
  std::cout << "fixtures written under " << root << "\n";
  return 0;
}
