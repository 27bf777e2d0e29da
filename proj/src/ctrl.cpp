#include "swingid/ctrl.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "swingid/errors.hpp"

namespace swingid {

void ControllerParams::validate() const {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!pos(c) || !pos(k_a) || !pos(i_v) || !pos(b_v))
    throw ValidationError("controller: admittance parameters must be positive");
  if (!pos(hf_cutoff) || !pos(fs))
    throw ValidationError("controller: rates must be positive");
  if (hf_cutoff >= 0.5 * fs)
    throw ValidationError("controller: hf_cutoff must be below Nyquist");
}

ControllerParams ControllerParams::from_config(const Config& cfg,
                                               const std::string& prefix) {
  ControllerParams p;
  p.c = cfg.get_double(prefix + ".c", p.c);
  p.k_a = cfg.get_double(prefix + ".k_a", p.k_a);
  p.i_v = cfg.get_double(prefix + ".i_v", p.i_v);
  p.b_v = cfg.get_double(prefix + ".b_v", p.b_v);
  p.hf_cutoff = cfg.get_double(prefix + ".hf_cutoff", p.hf_cutoff);
  p.fs = cfg.get_double(prefix + ".fs", p.fs);
  p.validate();
  return p;
}

void ControllerParams::to_config(Config& cfg, const std::string& prefix) const {
  cfg.set_double(prefix + ".c", c);
  cfg.set_double(prefix + ".k_a", k_a);
  cfg.set_double(prefix + ".i_v", i_v);
  cfg.set_double(prefix + ".b_v", b_v);
  cfg.set_double(prefix + ".hf_cutoff", hf_cutoff);
  cfg.set_double(prefix + ".fs", fs);
}

void PvaLimits::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(pos) || !positive(vel) || !positive(acc))
    throw ValidationError("limits: soft bounds must be positive");
  if (hard_pos < pos || hard_vel < vel)
    throw ValidationError("limits: hard bounds must cover the soft bounds");
  if (servo_pos < hard_pos)
    throw ValidationError("limits: servo bound must cover the hard bound");
  if (!positive(hard_torque))
    throw ValidationError("limits: torque bound must be positive");
}

PvaLimits PvaLimits::from_config(const Config& cfg, const std::string& prefix) {
  PvaLimits l;
  l.pos = cfg.get_double(prefix + ".pos", l.pos);
  l.vel = cfg.get_double(prefix + ".vel", l.vel);
  l.acc = cfg.get_double(prefix + ".acc", l.acc);
  l.hard_pos = cfg.get_double(prefix + ".hard_pos", l.hard_pos);
  l.hard_vel = cfg.get_double(prefix + ".hard_vel", l.hard_vel);
  l.hard_torque = cfg.get_double(prefix + ".hard_torque", l.hard_torque);
  l.servo_pos = cfg.get_double(prefix + ".servo_pos", l.servo_pos);
  l.validate();
  return l;
}

void PvaLimits::to_config(Config& cfg, const std::string& prefix) const {
  cfg.set_double(prefix + ".pos", pos);
  cfg.set_double(prefix + ".vel", vel);
  cfg.set_double(prefix + ".acc", acc);
  cfg.set_double(prefix + ".hard_pos", hard_pos);
  cfg.set_double(prefix + ".hard_vel", hard_vel);
  cfg.set_double(prefix + ".hard_torque", hard_torque);
  cfg.set_double(prefix + ".servo_pos", servo_pos);
}

double pva_limit(const PvaLimits& lim, double commanded_vel, double pos,
                 double vel, double dt) {
  if (!(dt > 0.0)) throw ValidationError("pva_limit: dt must be positive");
  double v = std::clamp(commanded_vel, -lim.vel, lim.vel);

  // largest speed toward a bound at distance d that can still stop inside it
  // under constant deceleration `acc`: v dt + v^2 / (2 acc) = d
  auto allowed = [&](double dist) {
    const double d = std::max(dist, 0.0);
    const double adt = lim.acc * dt;
    return -adt + std::sqrt(adt * adt + 2.0 * lim.acc * d);
  };
  v = std::min(v, allowed(lim.pos - pos));
  v = std::max(v, -allowed(pos + lim.pos));

  v = std::clamp(v, vel - lim.acc * dt, vel + lim.acc * dt);
  return v;
}

AdmittanceFilter::AdmittanceFilter(const ControllerParams& p) {
  p.validate();
  const double k = 2.0 * p.fs;  // bilinear transform s -> k (z-1)/(z+1)
  const double den = p.i_v * k + p.b_v;
  b0_ = p.c * (p.k_a * k + 1.0) / den;
  b1_ = p.c * (1.0 - p.k_a * k) / den;
  a1_ = (p.b_v - p.i_v * k) / den;
}

double AdmittanceFilter::step(double torque) {
  const double y = b0_ * torque + b1_ * u1_ - a1_ * y1_;
  u1_ = torque;
  y1_ = y;
  return y;
}

void AdmittanceFilter::reset() { u1_ = y1_ = 0.0; }

LowPass2::LowPass2(double cutoff_hz, double fs) {
  if (!(cutoff_hz > 0.0) || !(fs > 0.0) || cutoff_hz >= 0.5 * fs)
    throw ValidationError("low-pass: cutoff must lie in (0, fs/2)");
  const double w0 = 2.0 * M_PI * cutoff_hz / fs;
  const double cw = std::cos(w0), sw = std::sin(w0);
  const double q = 1.0 / std::sqrt(2.0);  // Butterworth
  const double alpha = sw / (2.0 * q);
  const double a0 = 1.0 + alpha;
  b0_ = (1.0 - cw) / 2.0 / a0;
  b1_ = (1.0 - cw) / a0;
  b2_ = b0_;
  a1_ = -2.0 * cw / a0;
  a2_ = (1.0 - alpha) / a0;
}

double LowPass2::step(double x) {
  const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
  x2_ = x1_;
  x1_ = x;
  y2_ = y1_;
  y1_ = y;
  return y;
}

void LowPass2::reset() { x1_ = x2_ = y1_ = y2_ = 0.0; }

void PlantModel::validate() const {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!pos(servo_gain) || !pos(motor_inertia))
    throw ValidationError("plant: servo parameters must be positive");
  if (!pos(crank_arm) || !pos(coupler_length) || !pos(attach_radius))
    throw ValidationError("plant: geometry must be positive");
  if (!pos(brace_stiffness) || !(brace_damping >= 0.0))
    throw ValidationError("plant: brace parameters invalid");
  if (!pos(leg_inertia) || !pos(leg_gravity) || !(leg_stiffness >= 0.0) ||
      !(leg_damping >= 0.0))
    throw ValidationError("plant: leg parameters invalid");
  if (sensor_delay < 0 || sensor_delay > 100)
    throw ValidationError("plant: sensor_delay out of range");
}

PlantModel PlantModel::from_config(const Config& cfg, const std::string& prefix) {
  PlantModel p;
  p.servo_gain = cfg.get_double(prefix + ".servo_gain", p.servo_gain);
  p.motor_inertia = cfg.get_double(prefix + ".motor_inertia", p.motor_inertia);
  p.crank_arm = cfg.get_double(prefix + ".crank_arm", p.crank_arm);
  p.coupler_length = cfg.get_double(prefix + ".coupler_length", p.coupler_length);
  p.brace_stiffness = cfg.get_double(prefix + ".brace_stiffness", p.brace_stiffness);
  p.brace_damping = cfg.get_double(prefix + ".brace_damping", p.brace_damping);
  p.attach_radius = cfg.get_double(prefix + ".attach_radius", p.attach_radius);
  p.leg_inertia = cfg.get_double(prefix + ".leg_inertia", p.leg_inertia);
  p.leg_gravity = cfg.get_double(prefix + ".leg_gravity", p.leg_gravity);
  p.leg_stiffness = cfg.get_double(prefix + ".leg_stiffness", p.leg_stiffness);
  p.leg_damping = cfg.get_double(prefix + ".leg_damping", p.leg_damping);
  p.sensor_delay =
      static_cast<int>(cfg.get_int(prefix + ".sensor_delay", p.sensor_delay));
  p.validate();
  return p;
}

void PlantModel::to_config(Config& cfg, const std::string& prefix) const {
  cfg.set_double(prefix + ".servo_gain", servo_gain);
  cfg.set_double(prefix + ".motor_inertia", motor_inertia);
  cfg.set_double(prefix + ".crank_arm", crank_arm);
  cfg.set_double(prefix + ".coupler_length", coupler_length);
  cfg.set_double(prefix + ".brace_stiffness", brace_stiffness);
  cfg.set_double(prefix + ".brace_damping", brace_damping);
  cfg.set_double(prefix + ".attach_radius", attach_radius);
  cfg.set_double(prefix + ".leg_inertia", leg_inertia);
  cfg.set_double(prefix + ".leg_gravity", leg_gravity);
  cfg.set_double(prefix + ".leg_stiffness", leg_stiffness);
  cfg.set_double(prefix + ".leg_damping", leg_damping);
  cfg.set_int(prefix + ".sensor_delay", sensor_delay);
}

PlantModel PlantModel::from_body(const BodyModel& body) {
  body.validate();
  PlantModel p;
  const double d_thigh = body.thigh.com_offset;
  const double d_shank = body.thigh.length + body.shank.com_offset;
  const double d_foot = body.thigh.length + body.shank.length + body.foot.com_offset;
  const double mgd = body.thigh.mass * d_thigh + body.shank.mass * d_shank +
                     body.foot.mass * d_foot;
  p.leg_inertia = body.thigh.inertia_com + body.thigh.mass * d_thigh * d_thigh +
                  body.shank.inertia_com + body.shank.mass * d_shank * d_shank +
                  body.foot.inertia_com + body.foot.mass * d_foot * d_foot;
  p.leg_gravity = kGravity * mgd;
  p.attach_radius = body.interaction_offset;
  p.validate();
  return p;
}

namespace {

struct PlantState {
  double th_m = 0.0, om_m = 0.0;  // motor angle / velocity
  double th_l = 0.0, om_l = 0.0;  // leg angle / velocity
};

double brace_force(const PlantModel& p, const PlantState& s) {
  const double stretch = p.crank_arm * s.th_m - p.attach_radius * s.th_l;
  const double rate = p.crank_arm * s.om_m - p.attach_radius * s.om_l;
  return p.brace_stiffness * stretch + p.brace_damping * rate;
}

PlantState derivative(const PlantModel& p, const PlantState& s, double vel_cmd) {
  const double f = brace_force(p, s);
  PlantState d;
  d.th_m = s.om_m;
  d.om_m = (p.servo_gain * (vel_cmd - s.om_m) - p.crank_arm * f) / p.motor_inertia;
  d.th_l = s.om_l;
  d.om_l = (p.attach_radius * f - p.leg_gravity * std::sin(s.th_l) -
            p.leg_stiffness * s.th_l - p.leg_damping * s.om_l) /
           p.leg_inertia;
  return d;
}

PlantState axpy(const PlantState& s, const PlantState& d, double h) {
  return {s.th_m + h * d.th_m, s.om_m + h * d.om_m, s.th_l + h * d.th_l,
          s.om_l + h * d.om_l};
}

void rk4_tick(const PlantModel& p, PlantState& s, double vel_cmd, double dt,
              int substeps) {
  const double h = dt / static_cast<double>(substeps);
  for (int k = 0; k < substeps; ++k) {
    const PlantState k1 = derivative(p, s, vel_cmd);
    const PlantState k2 = derivative(p, axpy(s, k1, 0.5 * h), vel_cmd);
    const PlantState k3 = derivative(p, axpy(s, k2, 0.5 * h), vel_cmd);
    const PlantState k4 = derivative(p, axpy(s, k3, h), vel_cmd);
    s.th_m += h / 6.0 * (k1.th_m + 2.0 * k2.th_m + 2.0 * k3.th_m + k4.th_m);
    s.om_m += h / 6.0 * (k1.om_m + 2.0 * k2.om_m + 2.0 * k3.om_m + k4.om_m);
    s.th_l += h / 6.0 * (k1.th_l + 2.0 * k2.th_l + 2.0 * k3.th_l + k4.th_l);
    s.om_l += h / 6.0 * (k1.om_l + 2.0 * k2.om_l + 2.0 * k3.om_l + k4.om_l);
  }
}

}  // namespace

LoopTraces simulate_loop(const ControllerParams& params, const PvaLimits& limits,
                         const PlantModel& plant,
                         const std::vector<double>& f_desired, int substeps) {
  params.validate();
  limits.validate();
  plant.validate();
  if (f_desired.empty()) throw ValidationError("simulate_loop: empty force profile");
  if (substeps < 1) throw ValidationError("simulate_loop: substeps must be >= 1");

  double peak = 0.0;
  for (double f : f_desired) {
    if (!std::isfinite(f)) throw ValidationError("simulate_loop: profile not finite");
    peak = std::max(peak, std::abs(f));
  }
  const double blowup = 10.0 * std::max(peak, 1.0);

  const double dt = 1.0 / params.fs;
  LowPass2 hf(params.hf_cutoff, params.fs);
  AdmittanceFilter hc(params);

  LoopTraces tr;
  tr.dt = dt;
  const std::size_t n = f_desired.size();
  tr.f_desired = f_desired;
  tr.f_filtered.resize(n);
  tr.f_measured.resize(n);
  tr.vel_desired.resize(n);
  tr.vel_command.resize(n);
  tr.motor_angle.resize(n);
  tr.motor_vel.resize(n);
  tr.leg_angle.resize(n);
  tr.limited.resize(n);

  PlantState s;
  double vel_cmd = 0.0;
  // force samples awaiting delivery to the controller (sensor/bus latency)
  std::deque<double> meas_queue(static_cast<std::size_t>(plant.sensor_delay), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    meas_queue.push_back(brace_force(plant, s));
    const double f_meas = meas_queue.front();
    meas_queue.pop_front();
    const double f_filt = hf.step(f_desired[k]);
    const double tau_in = plant.crank_arm * (f_filt - f_meas);
    const double v_d = hc.step(tau_in);
    const double v_c = pva_limit(limits, v_d, s.th_m, vel_cmd, dt);
    vel_cmd = v_c;

    rk4_tick(plant, s, vel_cmd, dt, substeps);

    tr.f_filtered[k] = f_filt;
    tr.f_measured[k] = brace_force(plant, s);
    tr.vel_desired[k] = v_d;
    tr.vel_command[k] = v_c;
    tr.motor_angle[k] = s.th_m;
    tr.motor_vel[k] = s.om_m;
    tr.leg_angle[k] = s.th_l;
    tr.limited[k] = std::abs(v_c - v_d) > 1e-12 ? 1 : 0;

    if (!std::isfinite(tr.f_measured[k]) || std::abs(tr.f_measured[k]) > blowup) {
      std::ostringstream msg;
      msg << "simulate_loop: diverged at t = " << dt * static_cast<double>(k)
          << " s (|F_m| = " << std::abs(tr.f_measured[k]) << " N, desired peak "
          << peak << " N)";
      throw AnalysisError(msg.str());
    }
  }
  return tr;
}

StepMetrics step_metrics(const std::vector<double>& y, double dt) {
  if (y.size() < 10) throw ValidationError("step_metrics: trace too short");
  if (!(dt > 0.0)) throw ValidationError("step_metrics: dt must be positive");

  const std::size_t tail = std::max<std::size_t>(1, y.size() / 5);
  const std::size_t start = y.size() - tail;
  double ss = 0.0;
  for (std::size_t i = start; i < y.size(); ++i) ss += y[i];
  ss /= static_cast<double>(tail);
  if (!std::isfinite(ss) || std::abs(ss) < 1e-9)
    throw AnalysisError("step_metrics: no usable steady state");
  for (std::size_t i = start; i < y.size(); ++i) {
    if (std::abs(y[i] - ss) > 0.02 * std::abs(ss))
      throw AnalysisError("step_metrics: trace does not settle");
  }

  // work on the response normalized to a positive step
  const double sgn = ss > 0.0 ? 1.0 : -1.0;
  auto val = [&](std::size_t i) { return sgn * y[i]; };
  const double target = sgn * ss;

  auto first_crossing = [&](double level) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (val(i) >= level) {
        if (i == 0 || val(i) == val(i - 1)) return dt * static_cast<double>(i);
        const double frac = (level - val(i - 1)) / (val(i) - val(i - 1));
        return dt * (static_cast<double>(i - 1) + frac);
      }
    }
    throw AnalysisError("step_metrics: level never reached");
  };

  StepMetrics m;
  m.steady_state = ss;
  m.rise_time = first_crossing(0.9 * target) - first_crossing(0.1 * target);
  double peak = val(0);
  for (std::size_t i = 1; i < y.size(); ++i) peak = std::max(peak, val(i));
  m.overshoot_pct = (peak - target) / target * 100.0;
  return m;
}

}  // namespace swingid
