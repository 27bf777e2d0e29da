#pragma once

#include <string>
#include <vector>

#include "swingid/model.hpp"

namespace swingid {

// Recorded (or synthesized) swing data on a uniform time grid: generalized
// coordinates, exogenous pelvis segment angle and the interaction force at
// the thigh attachment point. Forces are zero for unperturbed movements.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> q_pelvis;      // m
  std::vector<double> q_thigh, q_shank, q_foot;  // rad
  std::vector<double> pelvis_angle;  // rad
  std::vector<double> force_x, force_y;  // N

  std::size_t samples() const { return q_pelvis.size(); }
  double time_at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double t_end() const { return time_at(samples() - 1); }
  double fs() const { return 1.0 / dt; }

  GenCoord coord_at(std::size_t i) const {
    return {q_pelvis[i], q_thigh[i], q_shank[i], q_foot[i]};
  }
  JointVec joint_angles_at(std::size_t i) const {
    return joint_angles(coord_at(i), pelvis_angle[i]);
  }

  // Nearest grid index for a time value.
  std::size_t index_near(double t) const;

  void validate() const;

  // CSV schema: t, q_pelvis, q_thigh, q_shank, q_foot, pelvis_angle,
  // force_x, force_y. The time column must be uniform.
  static Trajectory from_csv(const std::string& path);
  void to_csv(const std::string& path) const;
};

// Feedforward generalized force series on a uniform grid.
struct FeedForward {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> pelvis;  // N
  std::vector<double> thigh, shank, foot;  // N m

  std::size_t samples() const { return pelvis.size(); }
  GenForce at(std::size_t i) const { return {pelvis[i], thigh[i], shank[i], foot[i]}; }
  void validate() const;

  static FeedForward from_csv(const std::string& path);
  void to_csv(const std::string& path) const;
};

// Joint impedance: rotational stiffness and damping at hip, knee, ankle.
struct ImpedanceParams {
  JointVec k;  // N m / rad
  JointVec d;  // N m s / rad

  static constexpr double kStiffnessMax = 200.0;
  static constexpr double kDampingMax = 10.0;

  Eigen::Matrix<double, 6, 1> as_vector() const {
    Eigen::Matrix<double, 6, 1> v;
    v << k.hip, k.knee, k.ankle, d.hip, d.knee, d.ankle;
    return v;
  }
  static ImpedanceParams from_vector(const Eigen::Matrix<double, 6, 1>& v) {
    return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
  }
  static Eigen::Matrix<double, 6, 1> lower_bounds() {
    return Eigen::Matrix<double, 6, 1>::Zero();
  }
  static Eigen::Matrix<double, 6, 1> upper_bounds() {
    Eigen::Matrix<double, 6, 1> v;
    v << kStiffnessMax, kStiffnessMax, kStiffnessMax, kDampingMax, kDampingMax,
        kDampingMax;
    return v;
  }
};

}  // namespace swingid
