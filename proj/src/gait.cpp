#include "swingid/gait.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "swingid/csv.hpp"
#include "swingid/errors.hpp"
#include "swingid/signal.hpp"

namespace swingid {

namespace {

const char* kGaitHeader[13] = {"t",      "grf_z",   "hip_l",        "knee_l",
                               "ankle_l", "hip_r",  "knee_r",       "ankle_r",
                               "pelvis_angle", "pelvis_x", "force_x", "force_y",
                               "pert"};

}  // namespace

void GaitRecording::validate() const {
  const std::size_t n = samples();
  if (n < 2) throw ValidationError("gait recording: need at least 2 samples");
  if (!(dt > 0.0)) throw ValidationError("gait recording: dt must be positive");
  const std::vector<double>* chans[] = {&grf,    &hip_l,   &knee_l,       &ankle_l,
                                        &hip_r,  &knee_r,  &ankle_r,      &pelvis_angle,
                                        &pelvis_x, &force_x, &force_y,    &pert};
  for (const auto* ch : chans)
    if (ch->size() != n) throw ValidationError("gait recording: channel length mismatch");
}

GaitRecording GaitRecording::from_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  GaitRecording rec;
  const std::vector<double>& ts = t.col("t");
  if (ts.size() < 2) throw ValidationError("gait recording: need at least 2 samples");
  rec.t0 = ts[0];
  rec.dt = ts[1] - ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (std::abs((ts[i] - ts[i - 1]) - rec.dt) > 1e-9 * std::max(1.0, std::abs(rec.dt)))
      throw ValidationError("gait recording: time column is not uniform");
  }
  rec.grf = t.col("grf_z");
  rec.hip_l = t.col("hip_l");
  rec.knee_l = t.col("knee_l");
  rec.ankle_l = t.col("ankle_l");
  rec.hip_r = t.col("hip_r");
  rec.knee_r = t.col("knee_r");
  rec.ankle_r = t.col("ankle_r");
  rec.pelvis_angle = t.col("pelvis_angle");
  rec.pelvis_x = t.col("pelvis_x");
  rec.force_x = t.col("force_x");
  rec.force_y = t.col("force_y");
  rec.pert = t.col("pert");
  rec.validate();
  return rec;
}

void GaitRecording::to_csv(const std::string& path) const {
  validate();
  CsvTable t;
  for (const char* name : kGaitHeader) t.header.emplace_back(name);
  const std::size_t n = samples();
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = time_at(i);
  t.cols = {ts,     grf,    hip_l,        knee_l,   ankle_l, hip_r, knee_r,
            ankle_r, pelvis_angle, pelvis_x, force_x, force_y, pert};
  write_csv(path, t);
}

void filter_forces(GaitRecording& rec, double cutoff_hz, int order) {
  rec.validate();
  rec.force_x = lowpass_zero_phase(rec.force_x, cutoff_hz, rec.fs(), order);
  rec.force_y = lowpass_zero_phase(rec.force_y, cutoff_hz, rec.fs(), order);
}

GaitEvents detect_events(const std::vector<double>& grf, double fs, double threshold,
                         double debounce_s) {
  if (grf.size() < 2) throw ValidationError("detect_events: signal too short");
  if (!(fs > 0.0)) throw ValidationError("detect_events: fs must be positive");
  const std::size_t window =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(debounce_s * fs)));

  GaitEvents ev;
  bool contact = grf[0] >= threshold;
  for (std::size_t i = 1; i < grf.size(); ++i) {
    const bool side = grf[i] >= threshold;
    if (side == contact) continue;
    if (i + window > grf.size()) break;  // not enough trailing evidence
    bool stable = true;
    for (std::size_t k = i; k < i + window; ++k) {
      if ((grf[k] >= threshold) != side) {
        stable = false;
        break;
      }
    }
    if (!stable) continue;  // short excursion, stay in the current phase
    contact = side;
    (side ? ev.heel_strikes : ev.toe_offs).push_back(i);
  }
  if (ev.heel_strikes.empty() && ev.toe_offs.empty())
    throw AnalysisError("detect_events: no gait events found");
  return ev;
}

void Stride::validate() const {
  if (!(fs > 0.0)) throw ValidationError("stride: fs must be positive");
  if (!(begin < toe_off && toe_off < end))
    throw ValidationError("stride: toe-off must lie strictly inside the stride");
  const std::size_t n = end - begin + 1;
  if (hip.size() != n || knee.size() != n || ankle.size() != n ||
      force_x.size() != n || force_y.size() != n || pelvis_angle.size() != n ||
      pelvis_x.size() != n)
    throw ValidationError("stride: channel length mismatch");
}

std::vector<Stride> cut_strides(const GaitRecording& rec, const GaitEvents& events,
                                Leg leg) {
  rec.validate();
  const auto& hs = events.heel_strikes;
  if (hs.size() < 2)
    throw AnalysisError("cut_strides: need at least two heel strikes");

  const std::vector<double>& hip = leg == Leg::Left ? rec.hip_l : rec.hip_r;
  const std::vector<double>& knee = leg == Leg::Left ? rec.knee_l : rec.knee_r;
  const std::vector<double>& ankle = leg == Leg::Left ? rec.ankle_l : rec.ankle_r;

  std::vector<Stride> out;
  for (std::size_t s = 0; s + 1 < hs.size(); ++s) {
    const std::size_t begin = hs[s], end = hs[s + 1];
    if (end >= rec.samples())
      throw ValidationError("cut_strides: event index outside the recording");

    std::vector<std::size_t> inside;
    for (std::size_t to : events.toe_offs)
      if (to > begin && to < end) inside.push_back(to);
    if (inside.size() != 1) {
      std::ostringstream msg;
      msg << "cut_strides: heel strikes at samples " << begin << " and " << end
          << " enclose " << inside.size() << " toe-offs (expected 1)";
      if (!inside.empty()) {
        msg << ":";
        for (std::size_t to : inside) msg << ' ' << to;
      }
      throw AnalysisError(msg.str());
    }

    Stride st;
    st.fs = rec.fs();
    st.begin = begin;
    st.end = end;
    st.toe_off = inside[0];
    const std::size_t n = end - begin + 1;
    st.hip.assign(hip.begin() + static_cast<long>(begin),
                  hip.begin() + static_cast<long>(begin + n));
    st.knee.assign(knee.begin() + static_cast<long>(begin),
                   knee.begin() + static_cast<long>(begin + n));
    st.ankle.assign(ankle.begin() + static_cast<long>(begin),
                    ankle.begin() + static_cast<long>(begin + n));
    st.force_x.assign(rec.force_x.begin() + static_cast<long>(begin),
                      rec.force_x.begin() + static_cast<long>(begin + n));
    st.force_y.assign(rec.force_y.begin() + static_cast<long>(begin),
                      rec.force_y.begin() + static_cast<long>(begin + n));
    st.pelvis_angle.assign(rec.pelvis_angle.begin() + static_cast<long>(begin),
                           rec.pelvis_angle.begin() + static_cast<long>(begin + n));
    st.pelvis_x.assign(rec.pelvis_x.begin() + static_cast<long>(begin),
                       rec.pelvis_x.begin() + static_cast<long>(begin + n));

    for (std::size_t i = begin; i <= end; ++i) {
      const bool rising = rec.pert[i] > 0.0 && (i == 0 || rec.pert[i - 1] <= 0.0);
      if (rising) {
        st.perturbed = true;
        st.onset = (static_cast<double>(i) - static_cast<double>(st.toe_off)) / st.fs;
        break;
      }
    }
    st.validate();
    out.push_back(std::move(st));
  }
  return out;
}

const std::vector<double>& StrideEnsemble::channel(std::size_t stride, int joint) const {
  const NormalizedStride& s = strides.at(stride);
  switch (joint) {
    case 0: return s.hip;
    case 1: return s.knee;
    default: return s.ankle;
  }
}

std::vector<double> StrideEnsemble::mean_curve(int joint) const {
  std::vector<double> m(n_points, 0.0);
  if (strides.empty()) return m;
  for (std::size_t s = 0; s < strides.size(); ++s) {
    const auto& c = channel(s, joint);
    for (std::size_t p = 0; p < n_points; ++p) m[p] += c[p];
  }
  for (double& v : m) v /= static_cast<double>(strides.size());
  return m;
}

std::vector<double> StrideEnsemble::std_curve(int joint) const {
  std::vector<double> sd(n_points, 0.0);
  if (strides.size() < 2) return sd;
  const std::vector<double> m = mean_curve(joint);
  for (std::size_t s = 0; s < strides.size(); ++s) {
    const auto& c = channel(s, joint);
    for (std::size_t p = 0; p < n_points; ++p) {
      const double d = c[p] - m[p];
      sd[p] += d * d;
    }
  }
  for (double& v : sd) v = std::sqrt(v / static_cast<double>(strides.size() - 1));
  return sd;
}

std::vector<double> StrideEnsemble::mean_force_magnitude() const {
  std::vector<double> fx(n_points, 0.0), fy(n_points, 0.0);
  if (strides.empty()) return fx;
  for (const NormalizedStride& s : strides) {
    for (std::size_t p = 0; p < n_points; ++p) {
      fx[p] += s.force_x[p];
      fy[p] += s.force_y[p];
    }
  }
  std::vector<double> mag(n_points);
  for (std::size_t p = 0; p < n_points; ++p)
    mag[p] = std::hypot(fx[p], fy[p]) / static_cast<double>(strides.size());
  return mag;
}

StrideEnsemble normalize_strides(const std::vector<Stride>& strides,
                                 std::size_t n_points) {
  if (n_points < 2) throw ValidationError("normalize_strides: need n_points >= 2");
  StrideEnsemble ens;
  ens.n_points = n_points;
  ens.strides.reserve(strides.size());
  for (const Stride& st : strides) {
    st.validate();
    NormalizedStride ns;
    ns.hip = resample_uniform(st.hip, n_points);
    ns.knee = resample_uniform(st.knee, n_points);
    ns.ankle = resample_uniform(st.ankle, n_points);
    ns.force_x = resample_uniform(st.force_x, n_points);
    ns.force_y = resample_uniform(st.force_y, n_points);
    ens.strides.push_back(std::move(ns));
  }
  return ens;
}

OutlierPartition outlier_filter(const StrideEnsemble& ensemble, double max_fraction) {
  const std::size_t n = ensemble.size();
  if (n < 4) throw ValidationError("outlier_filter: need at least 4 strides");

  std::vector<std::size_t> bad_points(n, 0);
  std::vector<double> values(n);
  for (int joint = 0; joint < 3; ++joint) {
    for (std::size_t p = 0; p < ensemble.n_points; ++p) {
      for (std::size_t s = 0; s < n; ++s) values[s] = ensemble.channel(s, joint)[p];
      const double q1 = quantile(values, 0.25);
      const double q3 = quantile(values, 0.75);
      const double iqr = q3 - q1;
      const double lo = q1 - 1.5 * iqr, hi = q3 + 1.5 * iqr;
      for (std::size_t s = 0; s < n; ++s)
        if (values[s] < lo || values[s] > hi) ++bad_points[s];
    }
  }

  OutlierPartition part;
  const double limit =
      max_fraction * 3.0 * static_cast<double>(ensemble.n_points);
  for (std::size_t s = 0; s < n; ++s) {
    if (static_cast<double>(bad_points[s]) > limit)
      part.discarded.push_back(s);
    else
      part.kept.push_back(s);
  }
  return part;
}

std::size_t match_unperturbed(const Stride& perturbed, const std::vector<Stride>& pool,
                              double onset, double window) {
  if (pool.empty()) throw ValidationError("match_unperturbed: empty pool");
  perturbed.validate();

  const double fs = perturbed.fs;
  const auto n_win = static_cast<std::size_t>(std::floor(window * fs + 1e-9)) + 1;

  // local indices of the window samples, relative to a stride's toe-off
  auto window_index = [&](const Stride& st, std::size_t m, std::size_t* idx) -> bool {
    const double tau = onset - window + static_cast<double>(m) / fs;
    const long off = std::lround(tau * fs);
    const long local = static_cast<long>(st.toe_off - st.begin) + off;
    if (local < 0 || local >= static_cast<long>(st.samples())) return false;
    *idx = static_cast<std::size_t>(local);
    return true;
  };

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  bool found = false;
  for (std::size_t s = 0; s < pool.size(); ++s) {
    const Stride& cand = pool[s];
    cand.validate();
    if (std::abs(cand.fs - fs) > 1e-9 * fs)
      throw ValidationError("match_unperturbed: sample-rate mismatch");
    double acc = 0.0;
    std::size_t count = 0;
    bool ok = true;
    for (std::size_t m = 0; m < n_win && ok; ++m) {
      std::size_t ip, ic;
      if (!window_index(perturbed, m, &ip) || !window_index(cand, m, &ic)) {
        ok = false;
        break;
      }
      const double dh = perturbed.hip[ip] - cand.hip[ic];
      const double dk = perturbed.knee[ip] - cand.knee[ic];
      const double da = perturbed.ankle[ip] - cand.ankle[ic];
      acc += dh * dh + dk * dk + da * da;
      count += 3;
    }
    if (!ok) continue;
    const double rmse = std::sqrt(acc / static_cast<double>(count));
    if (rmse < best) {
      best = rmse;
      best_idx = s;
      found = true;
    }
  }
  if (!found)
    throw ValidationError("match_unperturbed: window outside every pool stride");
  return best_idx;
}

std::vector<Stride> swing_filter(const std::vector<Stride>& strides, double onset,
                                 double window) {
  if (onset < 0.0) throw ValidationError("swing_filter: onset must be >= 0");
  std::vector<Stride> kept;
  for (const Stride& st : strides)
    if (st.swing_duration() >= onset + window - 1e-12) kept.push_back(st);
  return kept;
}

TransparencyReport transparency_metrics(const StrideEnsemble& no_device,
                                        const StrideEnsemble& min_impedance,
                                        const std::vector<double>& force_magnitude) {
  if (no_device.size() == 0 || min_impedance.size() == 0)
    throw ValidationError("transparency_metrics: empty ensemble");
  if (no_device.n_points != min_impedance.n_points)
    throw ValidationError("transparency_metrics: normalized length mismatch");

  TransparencyReport rep;
  JointTransparency* joints[3] = {&rep.hip, &rep.knee, &rep.ankle};
  for (int j = 0; j < 3; ++j) {
    const std::vector<double> ma = no_device.mean_curve(j);
    const std::vector<double> mb = min_impedance.mean_curve(j);
    std::vector<double> diff(ma.size());
    for (std::size_t p = 0; p < ma.size(); ++p) diff[p] = ma[p] - mb[p];
    joints[j]->rmse = rms(diff);
    joints[j]->isv = 2.0 * mean(no_device.std_curve(j));
    joints[j]->pass = joints[j]->rmse < joints[j]->isv;
  }

  rep.force_rms = force_magnitude.empty() ? 0.0 : rms(force_magnitude);
  for (double v : force_magnitude) rep.force_max = std::max(rep.force_max, std::abs(v));
  return rep;
}

StridePair extract_pair(const Stride& perturbed, const Stride& unperturbed) {
  perturbed.validate();
  unperturbed.validate();
  if (!perturbed.perturbed)
    throw ValidationError("extract_pair: first stride is not perturbed");
  if (std::abs(perturbed.fs - unperturbed.fs) > 1e-9 * perturbed.fs)
    throw ValidationError("extract_pair: sample-rate mismatch");

  const std::size_t np = perturbed.end - perturbed.toe_off + 1;
  const std::size_t nu = unperturbed.end - unperturbed.toe_off + 1;
  const std::size_t n = std::min(np, nu);
  if (n < 2) throw ValidationError("extract_pair: swing too short");

  auto build = [&](const Stride& st) {
    Trajectory tr;
    tr.t0 = 0.0;
    tr.dt = 1.0 / st.fs;
    const std::size_t off = st.toe_off - st.begin;
    tr.q_pelvis.resize(n);
    tr.q_thigh.resize(n);
    tr.q_shank.resize(n);
    tr.q_foot.resize(n);
    tr.pelvis_angle.resize(n);
    tr.force_x.resize(n);
    tr.force_y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = off + i;
      const JointVec ang{st.hip[k], st.knee[k], st.ankle[k]};
      GenCoord q;
      segment_angles_from_joints(ang, st.pelvis_angle[k], q);
      q.pelvis = st.pelvis_x[k];
      tr.q_pelvis[i] = q.pelvis;
      tr.q_thigh[i] = q.thigh;
      tr.q_shank[i] = q.shank;
      tr.q_foot[i] = q.foot;
      tr.pelvis_angle[i] = st.pelvis_angle[k];
      tr.force_x[i] = st.force_x[k];
      tr.force_y[i] = st.force_y[k];
    }
    return tr;
  };

  StridePair pair;
  pair.perturbed = build(perturbed);
  pair.unperturbed = build(unperturbed);
  pair.onset = perturbed.onset;
  return pair;
}

}  // namespace swingid
