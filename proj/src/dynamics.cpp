#include "swingid/dynamics.hpp"

#include <cmath>
#include <optional>

#include "swingid/errors.hpp"
#include "swingid/ode.hpp"
#include "swingid/signal.hpp"

namespace swingid {

FeedForward inverse_dynamics(const BodyModel& model, const Trajectory& unperturbed,
                             const DiffOptions& diff) {
  unperturbed.validate();
  model.validate();
  const DynConstants kc(model);
  const double fs = unperturbed.fs();
  const std::size_t n = unperturbed.samples();

  auto prep = [&](const std::vector<double>& ch) {
    return lowpass_zero_phase(ch, diff.lowpass_hz, fs, diff.order);
  };
  const std::vector<double>* raw[4] = {&unperturbed.q_pelvis, &unperturbed.q_thigh,
                                       &unperturbed.q_shank, &unperturbed.q_foot};
  std::vector<double> q[4], qd[4], qdd[4];
  for (int c = 0; c < 4; ++c) {
    q[c] = prep(*raw[c]);
    qd[c] = central_diff(q[c], unperturbed.dt);
    qdd[c] = central_diff2(q[c], unperturbed.dt);
  }

  FeedForward ff;
  ff.t0 = unperturbed.t0;
  ff.dt = unperturbed.dt;
  ff.pelvis.resize(n);
  ff.thigh.resize(n);
  ff.shank.resize(n);
  ff.foot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GenCoord qi{q[0][i], q[1][i], q[2][i], q[3][i]};
    const GenCoord qdi{qd[0][i], qd[1][i], qd[2][i], qd[3][i]};
    const Vec4 qddi(qdd[0][i], qdd[1][i], qdd[2][i], qdd[3][i]);
    Vec4 c, g;
    bias_forces(kc, qi, qdi, c, g);
    const Vec4 u = mass_matrix(kc, qi) * qddi + c - g;
    ff.pelvis[i] = u[0];
    ff.thigh[i] = u[1];
    ff.shank[i] = u[2];
    ff.foot[i] = u[3];
  }
  return ff;
}

JointVec feedback_torques(const ImpedanceParams& p, const JointVec& ang,
                          const JointVec& rate, const JointVec& ref_ang,
                          const JointVec& ref_rate) {
  return {-p.k.hip * (ang.hip - ref_ang.hip) - p.d.hip * (rate.hip - ref_rate.hip),
          -p.k.knee * (ang.knee - ref_ang.knee) - p.d.knee * (rate.knee - ref_rate.knee),
          -p.k.ankle * (ang.ankle - ref_ang.ankle) -
              p.d.ankle * (rate.ankle - ref_rate.ankle)};
}

namespace {

struct Channels {
  UniformSeries q[4];       // filtered coordinates
  UniformSeries qd_thigh;   // filtered thigh rate (J^T F uses the thigh only)
  UniformSeries pelvis_angle, pelvis_rate;
  UniformSeries fx, fy;     // raw forces, linear interpolation

  Channels(const Trajectory& tr, const DiffOptions& diff) {
    const double fs = tr.fs();
    auto prep = [&](const std::vector<double>& ch) {
      return lowpass_zero_phase(ch, diff.lowpass_hz, fs, diff.order);
    };
    const std::vector<double>* raw[4] = {&tr.q_pelvis, &tr.q_thigh, &tr.q_shank,
                                         &tr.q_foot};
    using K = UniformSeries::Kind;
    std::vector<double> filtered_thigh;
    for (int c = 0; c < 4; ++c) {
      auto f = prep(*raw[c]);
      if (c == 1) filtered_thigh = f;
      q[c] = UniformSeries(tr.t0, tr.dt, std::move(f), K::Cubic);
    }
    qd_thigh = UniformSeries(tr.t0, tr.dt, central_diff(filtered_thigh, tr.dt), K::Cubic);
    auto pa = prep(tr.pelvis_angle);
    pelvis_rate = UniformSeries(tr.t0, tr.dt, central_diff(pa, tr.dt), K::Cubic);
    pelvis_angle = UniformSeries(tr.t0, tr.dt, std::move(pa), K::Cubic);
    fx = UniformSeries(tr.t0, tr.dt, tr.force_x, K::Linear);
    fy = UniformSeries(tr.t0, tr.dt, tr.force_y, K::Linear);
  }
};

}  // namespace

struct PreparedSim::Impl {
  BodyModel model;
  DynConstants kc;
  SimOptions opts;
  bool has_perturbed = false;

  UniformSeries uff[4];
  // feedback reference (from the unperturbed condition, filtered)
  UniformSeries ref_ang[3], ref_rate[3];
  Channels ref_ch;
  std::optional<Channels> pert_ch;

  Eigen::Matrix<double, 8, 1> y0;
  std::vector<double> ts;
  std::vector<JointVec> measured_ang;  // raw angles of the simulated condition

  Impl(const BodyModel& model_in, const FeedForward& u_ff, const Trajectory& ref,
       const Trajectory* perturbed, const SimWindow& window, const SimOptions& opts_in)
      : model(model_in), kc(model_in), opts(opts_in), ref_ch(ref, opts_in.diff) {
    model.validate();
    ref.validate();
    u_ff.validate();
    if (perturbed) {
      perturbed->validate();
      if (std::abs(perturbed->dt - ref.dt) > 1e-12)
        throw ValidationError("simulate: perturbed/reference grid mismatch");
      has_perturbed = true;
      pert_ch.emplace(*perturbed, opts.diff);
    }
    if (!(window.t_end > window.t_begin))
      throw ValidationError("simulate: empty window");
    const Trajectory& src = perturbed ? *perturbed : ref;
    if (window.t_begin < ref.t0 - 1e-9 || window.t_end > ref.t_end() + 1e-9 ||
        window.t_begin < src.t0 - 1e-9 || window.t_end > src.t_end() + 1e-9)
      throw ValidationError("simulate: window outside trajectory support");

    using K = UniformSeries::Kind;
    uff[0] = UniformSeries(u_ff.t0, u_ff.dt, u_ff.pelvis, K::Cubic);
    uff[1] = UniformSeries(u_ff.t0, u_ff.dt, u_ff.thigh, K::Cubic);
    uff[2] = UniformSeries(u_ff.t0, u_ff.dt, u_ff.shank, K::Cubic);
    uff[3] = UniformSeries(u_ff.t0, u_ff.dt, u_ff.foot, K::Cubic);

    // feedback reference: filtered unperturbed joint angles and rates
    {
      const std::size_t n = ref.samples();
      std::vector<double> ang[3], rate[3];
      for (int j = 0; j < 3; ++j) {
        ang[j].resize(n);
        rate[j].resize(n);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double t = ref.time_at(i);
        const GenCoord qf{ref_ch.q[0](t), ref_ch.q[1](t), ref_ch.q[2](t),
                          ref_ch.q[3](t)};
        const JointVec a = joint_angles(qf, ref_ch.pelvis_angle(t));
        ang[0][i] = a.hip;
        ang[1][i] = a.knee;
        ang[2][i] = a.ankle;
      }
      for (int j = 0; j < 3; ++j) {
        rate[j] = central_diff(ang[j], ref.dt);
        ref_ang[j] = UniformSeries(ref.t0, ref.dt, std::move(ang[j]), K::Cubic);
        ref_rate[j] = UniformSeries(ref.t0, ref.dt, std::move(rate[j]), K::Cubic);
      }
    }

    // output grid: reference grid points inside the window
    const long i0 = static_cast<long>(std::ceil((window.t_begin - ref.t0) / ref.dt - 1e-9));
    const long i1 = static_cast<long>(std::floor((window.t_end - ref.t0) / ref.dt + 1e-9));
    if (i1 <= i0) throw ValidationError("simulate: window contains no grid points");
    for (long i = i0; i <= i1; ++i) ts.push_back(ref.time_at(static_cast<std::size_t>(i)));

    // initial state from the filtered unperturbed movement at the window start
    const double t_start = ts.front();
    Vec4 q0(ref_ch.q[0](t_start), ref_ch.q[1](t_start), ref_ch.q[2](t_start),
            ref_ch.q[3](t_start));
    // rates from the filtered channels, central differences on the grid
    {
      std::vector<double> tmp[4];
      const std::vector<double>* raw[4] = {&ref.q_pelvis, &ref.q_thigh, &ref.q_shank,
                                           &ref.q_foot};
      Vec4 qd0;
      for (int c = 0; c < 4; ++c) {
        tmp[c] = central_diff(
            lowpass_zero_phase(*raw[c], opts.diff.lowpass_hz, ref.fs(), opts.diff.order),
            ref.dt);
        UniformSeries s(ref.t0, ref.dt, std::move(tmp[c]), K::Cubic);
        qd0[c] = s(t_start);
      }
      y0 << q0, qd0;
    }

    // raw measured joint angles of the simulated condition on the output grid
    measured_ang.reserve(ts.size());
    for (double t : ts) {
      const std::size_t i = src.index_near(t);
      measured_ang.push_back(src.joint_angles_at(i));
    }
  }

  void rhs(double t, const Eigen::Matrix<double, 8, 1>& y,
           Eigen::Matrix<double, 8, 1>& dy, const ImpedanceParams& params) const {
    const GenCoord q{y[0], y[1], y[2], y[3]};
    const GenCoord qd{y[4], y[5], y[6], y[7]};
    const Channels& src = has_perturbed ? *pert_ch : ref_ch;

    const JointVec ang = joint_angles(q, src.pelvis_angle(t));
    const JointVec rate = joint_rates(qd, src.pelvis_rate(t));
    const JointVec ra{ref_ang[0](t), ref_ang[1](t), ref_ang[2](t)};
    const JointVec rr{ref_rate[0](t), ref_rate[1](t), ref_rate[2](t)};
    const JointVec tq = feedback_torques(params, ang, rate, ra, rr);

    Vec4 u = joint_torques_to_genforce(tq).vec();
    u[0] += uff[0](t);
    u[1] += uff[1](t);
    u[2] += uff[2](t);
    u[3] += uff[3](t);

    if (has_perturbed) {
      // J^T(q_p) F_p - J^T(q_u) F_u on measured kinematics; J depends on the
      // thigh angle only
      const double a = model.interaction_offset;
      const double thp = pert_ch->q[1](t);
      u[0] += pert_ch->fx(t) - ref_ch.fx(t);
      u[1] += a * (-std::cos(thp) * pert_ch->fx(t) + std::sin(thp) * pert_ch->fy(t));
      const double thu = ref_ch.q[1](t);
      u[1] -= a * (-std::cos(thu) * ref_ch.fx(t) + std::sin(thu) * ref_ch.fy(t));
    }

    Vec4 c, g;
    bias_forces(kc, q, qd, c, g);
    const Vec4 qdd = mass_matrix(kc, q).ldlt().solve(-c + g + u);
    dy.head<4>() = qd.vec();
    dy.tail<4>() = qdd;
  }

  SimResult run(const ImpedanceParams& params) const {
    OdeOptions oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    Dopri5<8> ode(oo);
    auto f = [&](double t, const Eigen::Matrix<double, 8, 1>& y,
                 Eigen::Matrix<double, 8, 1>& dy) { rhs(t, y, dy, params); };
    std::vector<Eigen::Matrix<double, 8, 1>> samples;
    // grid times double as breakpoints: the interpolated inputs lose
    // smoothness at their knots
    ode.integrate(f, ts.front(), y0, ts.back(), ts, &samples, ts);

    const Channels& src = has_perturbed ? *pert_ch : ref_ch;
    SimResult out;
    out.t = ts;
    out.q.reserve(ts.size());
    out.qd.reserve(ts.size());
    out.joint_ang.reserve(ts.size());
    out.joint_rate.reserve(ts.size());
    out.u_fb.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto& y = samples[i];
      const GenCoord q{y[0], y[1], y[2], y[3]};
      const GenCoord qd{y[4], y[5], y[6], y[7]};
      const double t = ts[i];
      const JointVec ang = joint_angles(q, src.pelvis_angle(t));
      const JointVec rate = joint_rates(qd, src.pelvis_rate(t));
      const JointVec ra{ref_ang[0](t), ref_ang[1](t), ref_ang[2](t)};
      const JointVec rr{ref_rate[0](t), ref_rate[1](t), ref_rate[2](t)};
      out.q.push_back(q);
      out.qd.push_back(qd);
      out.joint_ang.push_back(ang);
      out.joint_rate.push_back(rate);
      out.u_fb.push_back(feedback_torques(params, ang, rate, ra, rr));
    }
    return out;
  }
};

PreparedSim::PreparedSim(const BodyModel& model, const FeedForward& u_ff,
                         const Trajectory& ref, const Trajectory* perturbed,
                         const SimWindow& window, const SimOptions& opts)
    : impl_(std::make_unique<Impl>(model, u_ff, ref, perturbed, window, opts)) {}

PreparedSim::~PreparedSim() = default;
PreparedSim::PreparedSim(PreparedSim&&) noexcept = default;
PreparedSim& PreparedSim::operator=(PreparedSim&&) noexcept = default;

SimResult PreparedSim::run(const ImpedanceParams& params) const { return impl_->run(params); }

const std::vector<JointVec>& PreparedSim::measured_joint_angles() const {
  return impl_->measured_ang;
}

const std::vector<double>& PreparedSim::sample_times() const { return impl_->ts; }

SimResult simulate(const BodyModel& model, const FeedForward& u_ff,
                   const ImpedanceParams& params, const Trajectory& ref,
                   const Trajectory* perturbed, const SimWindow& window,
                   const SimOptions& opts) {
  return PreparedSim(model, u_ff, ref, perturbed, window, opts).run(params);
}

}  // namespace swingid
