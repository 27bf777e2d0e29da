#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "swingid/config.hpp"
#include "swingid/model.hpp"

namespace swingid {

// Admittance law mapping measured interaction torque to a desired angular
// velocity: th_dot_d = H_C(s) tau with H_C(s) = c (K_a s + 1) / (I_v s + B_v),
// realized discretely by the bilinear transform at the control rate. The
// desired-force input is smoothed by a second-order low-pass (H_F) first.
struct ControllerParams {
  double c = 0.5;          // dimensionless admittance scale
  double k_a = 0.017;      // s, numerator lead time constant
  double i_v = 0.2;        // kg m^2, virtual inertia
  double b_v = 3.0;        // N m s/rad, virtual damping
  double hf_cutoff = 30.0; // Hz, desired-force low-pass cutoff
  double fs = 1000.0;      // Hz, control loop rate

  void validate() const;
  static ControllerParams from_config(const Config& cfg,
                                      const std::string& prefix = "controller");
  void to_config(Config& cfg, const std::string& prefix = "controller") const;
};

// Actuator safety envelope. The soft bounds are enforced by pva_limit; the
// hard/servo layers sit further out and only participate in validation here
// (they trip physical safety hardware, not the control law).
struct PvaLimits {
  double pos = 1.22;   // rad
  double vel = 4.71;   // rad/s
  double acc = 500.0;  // rad/s^2
  double hard_pos = 1.31;     // rad
  double hard_vel = 6.28;     // rad/s
  double hard_torque = 120.0; // N m
  double servo_pos = 1.34;    // rad

  void validate() const;
  static PvaLimits from_config(const Config& cfg,
                               const std::string& prefix = "limits");
  void to_config(Config& cfg, const std::string& prefix = "limits") const;
};

// Velocity-limited, acceleration-limited command with position lookahead:
// near a position bound the admissible speed toward it shrinks so that a
// constant deceleration at the acceleration bound still stops inside the
// bound. Returns the velocity to apply over the next dt.
double pva_limit(const PvaLimits& lim, double commanded_vel, double pos,
                 double vel, double dt);

// First-order discrete filter realizing H_C (bilinear transform).
class AdmittanceFilter {
 public:
  explicit AdmittanceFilter(const ControllerParams& p);
  double step(double torque);
  void reset();

 private:
  double b0_, b1_, a1_;
  double u1_ = 0.0, y1_ = 0.0;
};

// Causal second-order Butterworth low-pass (bilinear, prewarped).
class LowPass2 {
 public:
  LowPass2(double cutoff_hz, double fs);
  double step(double x);
  void reset();

 private:
  double b0_, b1_, b2_, a1_, a2_;
  double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

// Simulation plant: a velocity-servoed motor whose crank pushes, through a
// stiff spring-damper brace, a hanging straight-leg pendulum. The servo is a
// proportional velocity loop (gain servo_gain on motor inertia), which acts
// as a first-order lag of time constant motor_inertia / servo_gain and
// droops under the reaction torque of the brace force.
struct PlantModel {
  double servo_gain = 54.0;      // N m s/rad, velocity-loop gain
  double motor_inertia = 0.108;  // kg m^2 (gain * 2 ms lag)
  double crank_arm = 0.45;       // m, rod moment arm at the motor
  double coupler_length = 0.84;  // m, connecting rod (documentation only;
                                 // the force map is linearized to crank_arm)
  double brace_stiffness = 1.6e4; // N/m
  double brace_damping = 2.0;     // N s/m
  double attach_radius = 0.36;   // m, hip to brace cuff on the thigh
  double leg_inertia = 2.35;     // kg m^2 about the hip, straight leg
  double leg_gravity = 38.2;     // N m/rad, m g d of the hanging leg
  double leg_stiffness = 150.0;  // N m/rad, passive hip tone holding the leg
  double leg_damping = 30.0;     // N m s/rad, tissue + joint damping
  int sensor_delay = 5;          // control ticks of force-measurement latency
                                 // (bus cycle + sensor conditioning lag)

  void validate() const;
  static PlantModel from_config(const Config& cfg,
                                const std::string& prefix = "plant");
  void to_config(Config& cfg, const std::string& prefix = "plant") const;

  // Straight-leg pendulum (thigh + shank + foot rigid, hanging from the hip)
  // derived from a body model; other fields keep their defaults.
  static PlantModel from_body(const BodyModel& body);
};

// Closed-loop signals sampled at the control rate.
struct LoopTraces {
  double dt = 1e-3;
  std::vector<double> f_desired;   // commanded force before H_F, N
  std::vector<double> f_filtered;  // after H_F, N
  std::vector<double> f_measured;  // brace force on the leg, N
  std::vector<double> vel_desired; // admittance output, rad/s
  std::vector<double> vel_command; // after the PVA limiter, rad/s
  std::vector<double> motor_angle; // rad
  std::vector<double> motor_vel;   // rad/s
  std::vector<double> leg_angle;   // rad
  std::vector<std::uint8_t> limited;  // 1 when the limiter clipped

  std::size_t samples() const { return f_desired.size(); }
};

// Runs the force-tracking loop for the given desired-force profile (one value
// per control tick). The continuous plant is integrated with classic RK4
// substeps inside each tick. Throws AnalysisError when the loop diverges
// (|F_m| above 10x the desired-force peak).
LoopTraces simulate_loop(const ControllerParams& params, const PvaLimits& limits,
                         const PlantModel& plant,
                         const std::vector<double>& f_desired, int substeps = 10);

struct StepMetrics {
  double steady_state = 0.0;   // N, mean over the final fifth
  double rise_time = 0.0;      // s, 10% to 90% of steady state
  double overshoot_pct = 0.0;  // (peak - ss) / ss * 100
};

// Metrics of a step-response trace. The trace must settle: every sample in
// the final fifth within 2% of the steady state, else AnalysisError.
StepMetrics step_metrics(const std::vector<double>& y, double dt);

}  // namespace swingid
