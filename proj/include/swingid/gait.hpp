#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "swingid/model.hpp"
#include "swingid/trajectory.hpp"

namespace swingid {

// Treadmill walking recording on a uniform grid: vertical ground reaction
// force of the instrumented (device) side, joint angles of both legs, pelvis
// kinematics, device interaction force, and a perturbation marker channel
// holding the commanded pulse amplitude while a pulse is active.
// CSV schema: t, grf_z, hip_l, knee_l, ankle_l, hip_r, knee_r, ankle_r,
// pelvis_angle, pelvis_x, force_x, force_y, pert.
struct GaitRecording {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> grf;
  std::vector<double> hip_l, knee_l, ankle_l;
  std::vector<double> hip_r, knee_r, ankle_r;
  std::vector<double> pelvis_angle, pelvis_x;
  std::vector<double> force_x, force_y;
  std::vector<double> pert;

  std::size_t samples() const { return grf.size(); }
  double fs() const { return 1.0 / dt; }
  double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }

  void validate() const;
  static GaitRecording from_csv(const std::string& path);
  void to_csv(const std::string& path) const;
};

enum class Leg { Left, Right };

// Zero-phase low-pass on the interaction force channels (the kinematic
// channels arrive already processed).
void filter_forces(GaitRecording& rec, double cutoff_hz = 40.0, int order = 4);

struct GaitEvents {
  std::vector<std::size_t> heel_strikes;  // upward threshold crossings
  std::vector<std::size_t> toe_offs;      // downward threshold crossings
};

// Threshold detector with debounce: a crossing counts only when the signal
// stays on the new side for the full debounce window. Throws AnalysisError
// when no events are found.
GaitEvents detect_events(const std::vector<double>& grf, double fs,
                         double threshold = 20.0, double debounce_s = 0.050);

// One gait cycle, heel strike to next heel strike (both ends included).
struct Stride {
  double fs = 0.0;
  std::size_t begin = 0, end = 0, toe_off = 0;  // absolute recording indices
  std::vector<double> hip, knee, ankle;         // analysis leg, samples begin..end
  std::vector<double> force_x, force_y;
  std::vector<double> pelvis_angle, pelvis_x;

  bool perturbed = false;
  double onset = -1.0;  // s after toe-off (swing start) when perturbed

  std::size_t samples() const { return hip.size(); }
  double duration() const { return static_cast<double>(end - begin) / fs; }
  double swing_duration() const { return static_cast<double>(end - toe_off) / fs; }
  void validate() const;
};

// Cuts the recording into strides between consecutive heel strikes. Each
// stride must contain exactly one toe-off; otherwise the heel-strike /
// toe-off alternation is violated and an AnalysisError listing the offending
// indices is thrown. A rising edge of the perturbation marker inside the
// stride marks it perturbed with the onset measured from toe-off.
std::vector<Stride> cut_strides(const GaitRecording& rec, const GaitEvents& events,
                                Leg leg = Leg::Left);

// Strides resampled to a common normalized grid (0..100% gait cycle).
struct NormalizedStride {
  std::vector<double> hip, knee, ankle;
  std::vector<double> force_x, force_y;
};

struct StrideEnsemble {
  std::size_t n_points = 0;
  std::vector<NormalizedStride> strides;

  std::size_t size() const { return strides.size(); }
  // 0 = hip, 1 = knee, 2 = ankle
  const std::vector<double>& channel(std::size_t stride, int joint) const;
  std::vector<double> mean_curve(int joint) const;
  std::vector<double> std_curve(int joint) const;   // sample std across strides
  std::vector<double> mean_force_magnitude() const;
};

StrideEnsemble normalize_strides(const std::vector<Stride>& strides,
                                 std::size_t n_points = 500);

struct OutlierPartition {
  std::vector<std::size_t> kept, discarded;
};

// Per-point quartile rule: a stride is discarded iff more than the given
// fraction of its points (pooled over hip, knee, ankle) lie strictly outside
// [Q1 - 1.5 IQR, Q3 + 1.5 IQR], with quartiles computed per normalized-time
// point across all strides in a single pass. Requires at least 4 strides.
OutlierPartition outlier_filter(const StrideEnsemble& ensemble,
                                double max_fraction = 0.20);

// Pool stride minimizing the joint-angle RMSE over the window
// [onset - window, onset] of swing-aligned time; earliest index on ties.
std::size_t match_unperturbed(const Stride& perturbed, const std::vector<Stride>& pool,
                              double onset, double window = 0.025);

// Keeps strides whose swing lasts at least onset + window.
std::vector<Stride> swing_filter(const std::vector<Stride>& strides, double onset,
                                 double window = 0.250);

struct JointTransparency {
  double rmse = 0.0;  // between condition mean curves, rad
  double isv = 0.0;   // twice the mean across-stride std of the reference, rad
  bool pass = false;  // rmse < isv
};

struct TransparencyReport {
  JointTransparency hip, knee, ankle;
  double force_rms = 0.0, force_max = 0.0;  // interaction force magnitude, N
  bool all_pass() const { return hip.pass && knee.pass && ankle.pass; }
};

// Device transparency: per-joint RMSE between the mean curves of walking
// without the device and with it in minimal impedance mode, compared against
// the intra-subject variability of the reference condition; plus RMS and
// maximum of the given interaction-force magnitude series.
TransparencyReport transparency_metrics(const StrideEnsemble& no_device,
                                        const StrideEnsemble& min_impedance,
                                        const std::vector<double>& force_magnitude);

// Swing-phase extraction of a matched perturbed/unperturbed stride pair as
// simulation trajectories: t = 0 at toe-off, truncated to the shorter swing.
// Segment angles are recovered from joint angles and the pelvis angle.
struct StridePair {
  Trajectory perturbed, unperturbed;
  double onset = 0.0;  // s after toe-off
};

StridePair extract_pair(const Stride& perturbed, const Stride& unperturbed);

}  // namespace swingid
