#include "swingid/trajectory.hpp"

#include <cmath>

#include "swingid/csv.hpp"
#include "swingid/errors.hpp"

namespace swingid {
namespace {

void check_uniform_time(const std::vector<double>& t, const std::string& what) {
  if (t.size() < 2) throw ValidationError(what + ": need at least 2 samples");
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw ValidationError(what + ": time must be increasing");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double step = t[i] - t[i - 1];
    if (std::abs(step - dt) > 1e-9 + 1e-6 * dt)
      throw ValidationError(what + ": non-uniform time grid at row " + std::to_string(i));
  }
}

}  // namespace

std::size_t Trajectory::index_near(double t) const {
  const double u = (t - t0) / dt;
  const long i = std::lround(u);
  if (i < 0) return 0;
  if (i >= static_cast<long>(samples())) return samples() - 1;
  return static_cast<std::size_t>(i);
}

void Trajectory::validate() const {
  if (!(dt > 0.0)) throw ValidationError("trajectory: dt must be positive");
  const std::size_t n = q_pelvis.size();
  if (n < 2) throw ValidationError("trajectory: need at least 2 samples");
  for (const auto* ch : {&q_thigh, &q_shank, &q_foot, &pelvis_angle, &force_x, &force_y})
    if (ch->size() != n) throw ValidationError("trajectory: channel length mismatch");
  for (const auto* ch :
       {&q_pelvis, &q_thigh, &q_shank, &q_foot, &pelvis_angle, &force_x, &force_y})
    for (double v : *ch)
      if (!std::isfinite(v)) throw ValidationError("trajectory: non-finite sample");
}

Trajectory Trajectory::from_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  Trajectory tr;
  const auto& time = t.col("t");
  check_uniform_time(time, path);
  tr.t0 = time.front();
  tr.dt = time[1] - time[0];
  tr.q_pelvis = t.col("q_pelvis");
  tr.q_thigh = t.col("q_thigh");
  tr.q_shank = t.col("q_shank");
  tr.q_foot = t.col("q_foot");
  tr.pelvis_angle = t.col("pelvis_angle");
  tr.force_x = t.col("force_x");
  tr.force_y = t.col("force_y");
  tr.validate();
  return tr;
}

void Trajectory::to_csv(const std::string& path) const {
  validate();
  CsvTable t;
  t.header = {"t", "q_pelvis", "q_thigh", "q_shank", "q_foot", "pelvis_angle",
              "force_x", "force_y"};
  std::vector<double> time(samples());
  for (std::size_t i = 0; i < samples(); ++i) time[i] = time_at(i);
  t.cols = {time, q_pelvis, q_thigh, q_shank, q_foot, pelvis_angle, force_x, force_y};
  write_csv(path, t);
}

void FeedForward::validate() const {
  if (!(dt > 0.0)) throw ValidationError("feedforward: dt must be positive");
  const std::size_t n = pelvis.size();
  if (n < 2) throw ValidationError("feedforward: need at least 2 samples");
  if (thigh.size() != n || shank.size() != n || foot.size() != n)
    throw ValidationError("feedforward: channel length mismatch");
  for (const auto* ch : {&pelvis, &thigh, &shank, &foot})
    for (double v : *ch)
      if (!std::isfinite(v)) throw ValidationError("feedforward: non-finite sample");
}

FeedForward FeedForward::from_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  FeedForward ff;
  const auto& time = t.col("t");
  check_uniform_time(time, path);
  ff.t0 = time.front();
  ff.dt = time[1] - time[0];
  ff.pelvis = t.col("u_pelvis");
  ff.thigh = t.col("u_thigh");
  ff.shank = t.col("u_shank");
  ff.foot = t.col("u_foot");
  ff.validate();
  return ff;
}

void FeedForward::to_csv(const std::string& path) const {
  validate();
  CsvTable t;
  t.header = {"t", "u_pelvis", "u_thigh", "u_shank", "u_foot"};
  std::vector<double> time(samples());
  for (std::size_t i = 0; i < samples(); ++i)
    time[i] = t0 + dt * static_cast<double>(i);
  t.cols = {time, pelvis, thigh, shank, foot};
  write_csv(path, t);
}

}  // namespace swingid
