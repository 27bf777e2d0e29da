#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "swingid/config.hpp"
#include "swingid/ident.hpp"
#include "swingid/rng.hpp"

namespace swingid {

// Rectangular force pulse applied at the thigh interaction point, sampled
// onto the recording grid. A negative onset disables the pulse.
struct Pulse {
  double onset = -1.0;  // s
  double width = 0.0;   // s
  double amp_x = 0.0;   // N
  double amp_y = 0.0;   // N
};

// Forward-generates a recording by integrating the rigid-body dynamics with
// the given feedforward, optional impedance feedback around a raw reference
// recording, and an optional force pulse acting on the simulated state. The
// grid is taken from the feedforward series.
Trajectory simulate_recording(const BodyModel& model, const FeedForward& u_ff,
                              const State& x0, const std::vector<double>& pelvis_angle,
                              const ImpedanceParams* feedback, const Trajectory* fb_ref,
                              const Pulse& pulse = {});

// Uniform measurement noise, U(-p2p/2, +p2p/2) per sample, added to the four
// generalized coordinate channels; forces and pelvis angle stay exact.
void add_measurement_noise(Trajectory& tr, Rng& rng, double peak_to_peak);

// A self-contained synthetic experiment: a feedforward series that drives a
// nominal swing from a known initial state, an exogenous pelvis-angle
// series, and a force pulse. Ground-truth impedance values are supplied per
// combination by the validation sweep.
struct Scenario {
  BodyModel model;
  FeedForward u_ff;
  State x0;
  double pelvis_offset = 0.0, pelvis_amp = 0.0, pelvis_period = 1.0;
  Pulse pulse;
  double noise_p2p = 0.01;  // uniform, rad or m, on the generalized coordinates

  // Reads model.* and scenario.* keys; scenario.feedforward is a CSV path
  // resolved against base_dir when relative.
  static Scenario from_config(const Config& cfg, const std::string& base_dir = ".");
  void to_config(Config& cfg, const std::string& feedforward_path) const;

  std::vector<double> pelvis_series() const;
  Trajectory build_unperturbed() const;
  Trajectory build_perturbed(const Trajectory& unperturbed,
                             const ImpedanceParams& truth) const;
};

struct SweepOptions {
  bool full = false;         // all level combinations instead of the smoke subset
  bool noisy = false;        // add measurement noise to both recordings
  std::uint64_t seed = 1;
  int threads = 1;
  int max_combos = 0;        // 0 = all; otherwise only the first N (smoke testing)
  IdentOptions ident;        // per-combination seeds are derived from `seed`
};

struct ComboResult {
  int index = 0;
  ImpedanceParams truth, est;
  double cost = 0.0, rmse = 0.0;
  JointVec vaf;
  int n_converged = 0, best_start = -1;
};

struct ErrorStats {
  double min = 0.0, max = 0.0, stddev = 0.0, mean = 0.0;
};

struct SweepResult {
  std::vector<ComboResult> combos;
  std::array<ErrorStats, 6> stats;  // order of ImpedanceParams::as_vector
};

// Ground-truth grids built from the per-joint levels {0, 75, 150} N m/rad
// and {0, 2, 4} N m s/rad. The full grid crosses all six parameters (3^6
// combinations); the smoke subset pairs each joint's stiffness and damping
// level and crosses the three joints (3^3 combinations).
std::vector<ImpedanceParams> validation_grid(bool full);

std::array<ErrorStats, 6> compute_error_stats(const std::vector<ComboResult>& combos);

SweepResult run_validation(const Scenario& scenario, const SweepOptions& opts);

// Per-combination table: truth, estimate, error per parameter plus fit
// diagnostics.
void write_combos_csv(const std::string& path, const SweepResult& result);
// min/max/std/mean of the estimation error per parameter.
void write_stats_csv(const std::string& path, const SweepResult& result);

}  // namespace swingid
