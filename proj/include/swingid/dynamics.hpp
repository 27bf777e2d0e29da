#pragma once

#include <memory>
#include <vector>

#include "swingid/model.hpp"
#include "swingid/trajectory.hpp"

namespace swingid {

// Preprocessing applied to measured coordinate channels before
// differentiation: zero-phase Butterworth low-pass. lowpass_hz <= 0 disables.
struct DiffOptions {
  double lowpass_hz = 40.0;
  int order = 4;
};

struct SimOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  DiffOptions diff;
};

// Time window [t_begin, t_end], snapped to grid points of the reference.
struct SimWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
};

// Feedforward generalized forces from measured kinematics: coordinates are
// low-pass filtered, differentiated with second-order central differences,
// and pushed through the closed-form equation of motion,
//   u_ff = M(q) qdd + C(q, qd) - G(q).
FeedForward inverse_dynamics(const BodyModel& model, const Trajectory& unperturbed,
                             const DiffOptions& diff = {});

// Impedance feedback torques T = -K (ang - ref_ang) - D (rate - ref_rate).
JointVec feedback_torques(const ImpedanceParams& p, const JointVec& ang,
                          const JointVec& rate, const JointVec& ref_ang,
                          const JointVec& ref_rate);

// Simulation output, sampled on the reference grid inside the window.
struct SimResult {
  std::vector<double> t;
  std::vector<GenCoord> q, qd;
  std::vector<JointVec> joint_ang;   // with the simulated condition's pelvis angle
  std::vector<JointVec> joint_rate;
  std::vector<JointVec> u_fb;        // feedback torques at the samples

  std::size_t samples() const { return t.size(); }
};

// Forward swing simulation with impedance feedback around the measured
// unperturbed movement. The reference supplies feedback targets and the
// initial state (filtered coordinates at the window start). When `perturbed`
// is non-null its pelvis angle drives the joint-angle map and the external
// term J^T(q_p) F_p - J^T(q_u) F_u, evaluated on measured kinematics, is
// added. Preparation (filtering, differentiation, interpolant construction)
// is cached so repeated runs with different impedance parameters are cheap.
class PreparedSim {
 public:
  PreparedSim(const BodyModel& model, const FeedForward& u_ff, const Trajectory& ref,
              const Trajectory* perturbed, const SimWindow& window,
              const SimOptions& opts = {});
  ~PreparedSim();
  PreparedSim(PreparedSim&&) noexcept;
  PreparedSim& operator=(PreparedSim&&) noexcept;

  SimResult run(const ImpedanceParams& params) const;

  // Measured joint angles of the simulated condition on the output grid
  // (raw, unfiltered), for building prediction targets.
  const std::vector<JointVec>& measured_joint_angles() const;
  const std::vector<double>& sample_times() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SimResult simulate(const BodyModel& model, const FeedForward& u_ff,
                   const ImpedanceParams& params, const Trajectory& ref,
                   const Trajectory* perturbed, const SimWindow& window,
                   const SimOptions& opts = {});

}  // namespace swingid
