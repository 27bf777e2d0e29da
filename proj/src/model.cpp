#include "swingid/model.hpp"

#include <cmath>
#include <string>

#include "swingid/errors.hpp"

namespace swingid {

void SegmentParams::validate(const char* name) const {
  auto bad = [&](const char* what) {
    throw ValidationError(std::string("segment '") + name + "': " + what);
  };
  if (!(mass > 0.0) || !std::isfinite(mass)) bad("mass must be positive");
  if (!(inertia_com > 0.0) || !std::isfinite(inertia_com)) bad("inertia must be positive");
  if (!(length > 0.0) || !std::isfinite(length)) bad("length must be positive");
  if (!(com_offset >= 0.0) || !(com_offset <= length) || !std::isfinite(com_offset))
    bad("com_offset must lie in [0, length]");
}

void BodyModel::validate() const {
  thigh.validate("thigh");
  shank.validate("shank");
  foot.validate("foot");
  if (!(cart_mass > 0.0) || !std::isfinite(cart_mass))
    throw ValidationError("cart_mass must be positive");
  if (!(interaction_offset >= 0.0) || !(interaction_offset <= thigh.length))
    throw ValidationError("interaction_offset must lie in [0, thigh.length]");
}

double BodyModel::total_mass() const {
  return cart_mass + thigh.mass + shank.mass + foot.mass;
}

namespace {

SegmentParams segment_from_config(const Config& cfg, const std::string& p) {
  SegmentParams s;
  s.mass = cfg.get_double(p + ".mass");
  s.inertia_com = cfg.get_double(p + ".inertia");
  s.length = cfg.get_double(p + ".length");
  s.com_offset = cfg.get_double(p + ".com_offset");
  return s;
}

void segment_to_config(const SegmentParams& s, Config& cfg, const std::string& p) {
  cfg.set_double(p + ".mass", s.mass);
  cfg.set_double(p + ".inertia", s.inertia_com);
  cfg.set_double(p + ".length", s.length);
  cfg.set_double(p + ".com_offset", s.com_offset);
}

}  // namespace

BodyModel BodyModel::from_config(const Config& cfg, const std::string& prefix) {
  BodyModel m;
  m.thigh = segment_from_config(cfg, prefix + ".thigh");
  m.shank = segment_from_config(cfg, prefix + ".shank");
  m.foot = segment_from_config(cfg, prefix + ".foot");
  m.cart_mass = cfg.get_double(prefix + ".cart_mass");
  m.interaction_offset = cfg.get_double(prefix + ".interaction_offset");
  m.validate();
  return m;
}

void BodyModel::to_config(Config& cfg, const std::string& prefix) const {
  segment_to_config(thigh, cfg, prefix + ".thigh");
  segment_to_config(shank, cfg, prefix + ".shank");
  segment_to_config(foot, cfg, prefix + ".foot");
  cfg.set_double(prefix + ".cart_mass", cart_mass);
  cfg.set_double(prefix + ".interaction_offset", interaction_offset);
}

DynConstants::DynConstants(const BodyModel& m) {
  const auto& t = m.thigh;
  const auto& s = m.shank;
  const auto& f = m.foot;
  mu0 = m.total_mass();
  h1 = t.mass * t.com_offset + (s.mass + f.mass) * t.length;
  h2 = s.mass * s.com_offset + f.mass * s.length;
  h3 = f.mass * f.com_offset;
  j1 = t.inertia_com + t.mass * t.com_offset * t.com_offset +
       (s.mass + f.mass) * t.length * t.length;
  j2 = s.inertia_com + s.mass * s.com_offset * s.com_offset + f.mass * s.length * s.length;
  j3 = f.inertia_com + f.mass * f.com_offset * f.com_offset;
  g12 = h2 * t.length;
  g13 = h3 * t.length;
  g23 = h3 * s.length;
}

Mat4 mass_matrix(const BodyModel& m, const GenCoord& q) {
  return mass_matrix(DynConstants(m), q);
}

Mat4 mass_matrix(const DynConstants& k, const GenCoord& q) {
  const double c1 = std::cos(q.thigh), c2 = std::cos(q.shank), c3 = std::cos(q.foot);
  Mat4 M;
  M(0, 0) = k.mu0;
  M(0, 1) = M(1, 0) = -k.h1 * c1;
  M(0, 2) = M(2, 0) = -k.h2 * c2;
  M(0, 3) = M(3, 0) = -k.h3 * c3;
  M(1, 1) = k.j1;
  M(2, 2) = k.j2;
  M(3, 3) = k.j3;
  M(1, 2) = M(2, 1) = k.g12 * std::cos(q.thigh - q.shank);
  M(1, 3) = M(3, 1) = k.g13 * std::cos(q.thigh - q.foot);
  M(2, 3) = M(3, 2) = k.g23 * std::cos(q.shank - q.foot);
  return M;
}

void bias_forces(const DynConstants& k, const GenCoord& q, const GenCoord& qd,
                 Vec4& c_out, Vec4& g_out) {
  const double s1 = std::sin(q.thigh), s2 = std::sin(q.shank), s3 = std::sin(q.foot);
  const double s12 = std::sin(q.thigh - q.shank);
  const double s13 = std::sin(q.thigh - q.foot);
  const double s23 = std::sin(q.shank - q.foot);
  const double w1 = qd.thigh, w2 = qd.shank, w3 = qd.foot;

  c_out[0] = k.h1 * s1 * w1 * w1 + k.h2 * s2 * w2 * w2 + k.h3 * s3 * w3 * w3;
  c_out[1] = k.g12 * s12 * w2 * w2 + k.g13 * s13 * w3 * w3;
  c_out[2] = -k.g12 * s12 * w1 * w1 + k.g23 * s23 * w3 * w3;
  c_out[3] = -k.g13 * s13 * w1 * w1 - k.g23 * s23 * w2 * w2;

  g_out[0] = 0.0;
  g_out[1] = -kGravity * k.h1 * s1;
  g_out[2] = -kGravity * k.h2 * s2;
  g_out[3] = -kGravity * k.h3 * s3;
}

Eigen::Matrix<double, 2, 4> interaction_jacobian(const BodyModel& m, const GenCoord& q) {
  const double a = m.interaction_offset;
  Eigen::Matrix<double, 2, 4> J = Eigen::Matrix<double, 2, 4>::Zero();
  J(0, 0) = 1.0;
  J(0, 1) = -a * std::cos(q.thigh);
  J(1, 1) = a * std::sin(q.thigh);
  return J;
}

Vec2 interaction_point(const BodyModel& m, const GenCoord& q) {
  const double a = m.interaction_offset;
  return {q.pelvis - a * std::sin(q.thigh), -a * std::cos(q.thigh)};
}

double kinetic_energy(const BodyModel& m, const State& s) {
  const Vec4 qd = s.qd.vec();
  return 0.5 * qd.dot(mass_matrix(m, s.q) * qd);
}

double potential_energy(const BodyModel& m, const GenCoord& q) {
  const DynConstants k(m);
  // COM heights relative to the hip; hanging configuration (q = 0) is the
  // reference minimum, shifted so potential_energy(0) = 0.
  return kGravity * ((k.h1 + k.h2 + k.h3) -
                     (k.h1 * std::cos(q.thigh) + k.h2 * std::cos(q.shank) +
                      k.h3 * std::cos(q.foot)));
}

JointVec joint_angles(const GenCoord& q, double pelvis_angle) {
  return {pelvis_angle - q.thigh, q.thigh - q.shank, q.shank - q.foot};
}

JointVec joint_rates(const GenCoord& qd, double pelvis_rate) {
  return {pelvis_rate - qd.thigh, qd.thigh - qd.shank, qd.shank - qd.foot};
}

void segment_angles_from_joints(const JointVec& j, double pelvis_angle, GenCoord& q) {
  q.thigh = pelvis_angle - j.hip;
  q.shank = q.thigh - j.knee;
  q.foot = q.shank - j.ankle;
}

GenForce joint_torques_to_genforce(const JointVec& t) {
  return {0.0, t.knee - t.hip, t.ankle - t.knee, -t.ankle};
}

}  // namespace swingid
