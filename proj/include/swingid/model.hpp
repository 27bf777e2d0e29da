#pragma once

#include <Eigen/Dense>
#include <array>

#include "swingid/config.hpp"

namespace swingid {

inline constexpr double kGravity = 9.81;  // m/s^2

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Vec2 = Eigen::Vector2d;

// One rigid segment of the swing-leg chain. Angles are measured from the
// downward vertical; a positive angle tips the distal end against the walking
// direction (+x), i.e. the direction of a segment at angle th is
// e(th) = (-sin th, -cos th). com_offset and length are measured from the
// proximal joint along the segment.
struct SegmentParams {
  double mass = 0.0;        // kg
  double inertia_com = 0.0; // kg m^2 about the segment COM
  double length = 0.0;      // m, proximal to distal joint
  double com_offset = 0.0;  // m, proximal joint to COM

  void validate(const char* name) const;
};

// Planar cart (pelvis) carrying a hanging thigh-shank-foot chain.
struct BodyModel {
  SegmentParams thigh, shank, foot;
  double cart_mass = 0.0;          // kg, pelvis + trunk share riding the cart
  double interaction_offset = 0.0; // m, hip to force application point on the thigh

  void validate() const;
  double total_mass() const;

  // Reads model.{cart_mass,interaction_offset,thigh.*,shank.*,foot.*}.
  static BodyModel from_config(const Config& cfg, const std::string& prefix = "model");
  void to_config(Config& cfg, const std::string& prefix = "model") const;
};

// Generalized coordinates: cart position (m) and global segment angles (rad).
struct GenCoord {
  double pelvis = 0.0;  // x position of the cart
  double thigh = 0.0, shank = 0.0, foot = 0.0;

  Vec4 vec() const { return Vec4(pelvis, thigh, shank, foot); }
  static GenCoord from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

struct State {
  GenCoord q, qd;
};

// Joint-space quantities (hip, knee, ankle). Also used for rates and torques.
struct JointVec {
  double hip = 0.0, knee = 0.0, ankle = 0.0;

  Eigen::Vector3d vec() const { return {hip, knee, ankle}; }
};

// Generalized forces conjugate to GenCoord (N on pelvis, N m on segments).
struct GenForce {
  double pelvis = 0.0, thigh = 0.0, shank = 0.0, foot = 0.0;

  Vec4 vec() const { return Vec4(pelvis, thigh, shank, foot); }
  static GenForce from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

// Lumped constants of the closed-form dynamics; cached per model.
struct DynConstants {
  double mu0;                 // total translating mass
  double h1, h2, h3;          // first moments about the proximal joints
  double j1, j2, j3;          // effective diagonal inertias
  double g12, g13, g23;       // pairwise coupling products

  explicit DynConstants(const BodyModel& m);
};

// Joint-space mass matrix M(q) of the cart + 3-segment chain; symmetric,
// positive definite, independent of cart position.
Mat4 mass_matrix(const BodyModel& m, const GenCoord& q);
Mat4 mass_matrix(const DynConstants& k, const GenCoord& q);

// Velocity-product (centrifugal/Coriolis) vector C(q, qd) and gravity vector
// G(q), with the equation of motion written as M qdd = -C + G + u.
void bias_forces(const DynConstants& k, const GenCoord& q, const GenCoord& qd,
                 Vec4& c_out, Vec4& g_out);

// Jacobian of the force application point (interaction_offset below the hip
// on the thigh) with respect to the generalized coordinates. Rows: x, y.
Eigen::Matrix<double, 2, 4> interaction_jacobian(const BodyModel& m, const GenCoord& q);

// Position of the force application point (cart at y = 0).
Vec2 interaction_point(const BodyModel& m, const GenCoord& q);

// Kinetic and potential energy (potential zero with all segments hanging).
double kinetic_energy(const BodyModel& m, const State& s);
double potential_energy(const BodyModel& m, const GenCoord& q);

// Joint angles from segment angles: hip = pelvis_angle - q_thigh,
// knee = q_thigh - q_shank, ankle = q_shank - q_foot. The same linear map
// applies to rates (with the pelvis angular rate) and is inverted by
// segment_angles_from_joints.
JointVec joint_angles(const GenCoord& q, double pelvis_angle);
JointVec joint_rates(const GenCoord& qd, double pelvis_rate);
void segment_angles_from_joints(const JointVec& j, double pelvis_angle, GenCoord& q);

// Maps joint torques (acting positively on the distal side) to generalized
// forces: u_pelvis = 0, u_thigh = T_knee - T_hip, u_shank = T_ankle - T_knee,
// u_foot = -T_ankle.
GenForce joint_torques_to_genforce(const JointVec& t);

}  // namespace swingid
