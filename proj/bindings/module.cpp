#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swingid/ctrl.hpp"
#include "swingid/dynamics.hpp"
#include "swingid/gait.hpp"
#include "swingid/ident.hpp"
#include "swingid/model.hpp"
#include "swingid/spectral.hpp"
#include "swingid/trajectory.hpp"
#include "swingid/version.hpp"

namespace py = pybind11;
using namespace swingid;

PYBIND11_MODULE(_core, m) {
  m.doc() = "swing-leg impedance toolkit: planar swing dynamics, joint "
            "impedance identification, gait event detection, and "
            "admittance-controller simulation";
  m.attr("__version__") = kVersion;

  py::class_<SegmentParams>(m, "SegmentParams")
      .def(py::init<>())
      .def(py::init([](double mass, double inertia_com, double length,
                       double com_offset) {
             return SegmentParams{mass, inertia_com, length, com_offset};
           }),
           py::arg("mass"), py::arg("inertia_com"), py::arg("length"),
           py::arg("com_offset"))
      .def_readwrite("mass", &SegmentParams::mass)
      .def_readwrite("inertia_com", &SegmentParams::inertia_com)
      .def_readwrite("length", &SegmentParams::length)
      .def_readwrite("com_offset", &SegmentParams::com_offset);

  py::class_<BodyModel>(m, "BodyModel")
      .def(py::init<>())
      .def_readwrite("thigh", &BodyModel::thigh)
      .def_readwrite("shank", &BodyModel::shank)
      .def_readwrite("foot", &BodyModel::foot)
      .def_readwrite("cart_mass", &BodyModel::cart_mass)
      .def_readwrite("interaction_offset", &BodyModel::interaction_offset)
      .def("validate", &BodyModel::validate);

  py::class_<JointVec>(m, "JointVec")
      .def(py::init<>())
      .def(py::init([](double hip, double knee, double ankle) {
             return JointVec{hip, knee, ankle};
           }),
           py::arg("hip"), py::arg("knee"), py::arg("ankle"))
      .def_readwrite("hip", &JointVec::hip)
      .def_readwrite("knee", &JointVec::knee)
      .def_readwrite("ankle", &JointVec::ankle)
      .def("__repr__", [](const JointVec& v) {
        return "JointVec(hip=" + std::to_string(v.hip) +
               ", knee=" + std::to_string(v.knee) +
               ", ankle=" + std::to_string(v.ankle) + ")";
      });

  py::class_<ImpedanceParams>(m, "ImpedanceParams")
      .def(py::init<>())
      .def(py::init([](const JointVec& k, const JointVec& d) {
             return ImpedanceParams{k, d};
           }),
           py::arg("k"), py::arg("d"))
      .def_readwrite("k", &ImpedanceParams::k)
      .def_readwrite("d", &ImpedanceParams::d);

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init<>())
      .def_readwrite("t0", &Trajectory::t0)
      .def_readwrite("dt", &Trajectory::dt)
      .def_readwrite("q_pelvis", &Trajectory::q_pelvis)
      .def_readwrite("q_thigh", &Trajectory::q_thigh)
      .def_readwrite("q_shank", &Trajectory::q_shank)
      .def_readwrite("q_foot", &Trajectory::q_foot)
      .def_readwrite("pelvis_angle", &Trajectory::pelvis_angle)
      .def_readwrite("force_x", &Trajectory::force_x)
      .def_readwrite("force_y", &Trajectory::force_y)
      .def("samples", &Trajectory::samples)
      .def_static("from_csv", &Trajectory::from_csv, py::arg("path"))
      .def("to_csv", &Trajectory::to_csv, py::arg("path"));

  py::class_<FeedForward>(m, "FeedForward")
      .def(py::init<>())
      .def_readwrite("t0", &FeedForward::t0)
      .def_readwrite("dt", &FeedForward::dt)
      .def_readwrite("pelvis", &FeedForward::pelvis)
      .def_readwrite("thigh", &FeedForward::thigh)
      .def_readwrite("shank", &FeedForward::shank)
      .def_readwrite("foot", &FeedForward::foot)
      .def("samples", &FeedForward::samples)
      .def_static("from_csv", &FeedForward::from_csv, py::arg("path"))
      .def("to_csv", &FeedForward::to_csv, py::arg("path"));

  m.def("inverse_dynamics",
        [](const BodyModel& model, const Trajectory& tr) {
          return inverse_dynamics(model, tr);
        },
        py::arg("model"), py::arg("trajectory"),
        py::call_guard<py::gil_scoped_release>(),
        "Feed-forward generalized forces reproducing the recorded movement");

  py::class_<IdentOptions>(m, "IdentOptions")
      .def(py::init<>())
      .def_readwrite("n_starts", &IdentOptions::n_starts)
      .def_readwrite("seed", &IdentOptions::seed)
      .def_readwrite("threads", &IdentOptions::threads)
      .def_readwrite("window_before", &IdentOptions::window_before)
      .def_readwrite("window_after", &IdentOptions::window_after);

  py::class_<StartReport>(m, "StartReport")
      .def_readonly("x0", &StartReport::x0)
      .def_readonly("params", &StartReport::params)
      .def_readonly("cost", &StartReport::cost)
      .def_readonly("converged", &StartReport::converged)
      .def_readonly("iterations", &StartReport::iterations);

  py::class_<IdentResult>(m, "IdentResult")
      .def_readonly("params", &IdentResult::params)
      .def_readonly("cost", &IdentResult::cost)
      .def_readonly("rmse", &IdentResult::rmse)
      .def_readonly("vaf", &IdentResult::vaf)
      .def_readonly("best_start", &IdentResult::best_start)
      .def_readonly("n_converged", &IdentResult::n_converged)
      .def_readonly("starts", &IdentResult::starts);

  m.def("identify",
        [](const BodyModel& model, const Trajectory& unperturbed,
           const Trajectory& perturbed, double onset, const IdentOptions& opts) {
          return IdentProblem(model, unperturbed, perturbed, onset, opts)
              .identify();
        },
        py::arg("model"), py::arg("unperturbed"), py::arg("perturbed"),
        py::arg("onset"), py::arg("options") = IdentOptions(),
        py::call_guard<py::gil_scoped_release>(),
        "Joint stiffness/damping from an unperturbed/perturbed recording pair");

  py::class_<GaitEvents>(m, "GaitEvents")
      .def_readonly("heel_strikes", &GaitEvents::heel_strikes)
      .def_readonly("toe_offs", &GaitEvents::toe_offs);

  m.def("detect_events", &detect_events, py::arg("grf"), py::arg("fs"),
        py::arg("threshold") = 20.0, py::arg("debounce") = 0.050,
        "Heel strikes and toe-offs from a vertical ground reaction force");

  py::class_<ControllerParams>(m, "ControllerParams")
      .def(py::init<>())
      .def_readwrite("c", &ControllerParams::c)
      .def_readwrite("k_a", &ControllerParams::k_a)
      .def_readwrite("i_v", &ControllerParams::i_v)
      .def_readwrite("b_v", &ControllerParams::b_v)
      .def_readwrite("hf_cutoff", &ControllerParams::hf_cutoff)
      .def_readwrite("fs", &ControllerParams::fs);

  py::class_<PvaLimits>(m, "PvaLimits")
      .def(py::init<>())
      .def_readwrite("pos", &PvaLimits::pos)
      .def_readwrite("vel", &PvaLimits::vel)
      .def_readwrite("acc", &PvaLimits::acc)
      .def_readwrite("hard_pos", &PvaLimits::hard_pos)
      .def_readwrite("hard_vel", &PvaLimits::hard_vel)
      .def_readwrite("hard_torque", &PvaLimits::hard_torque)
      .def_readwrite("servo_pos", &PvaLimits::servo_pos);

  py::class_<PlantModel>(m, "PlantModel")
      .def(py::init<>())
      .def_readwrite("servo_gain", &PlantModel::servo_gain)
      .def_readwrite("motor_inertia", &PlantModel::motor_inertia)
      .def_readwrite("crank_arm", &PlantModel::crank_arm)
      .def_readwrite("brace_stiffness", &PlantModel::brace_stiffness)
      .def_readwrite("brace_damping", &PlantModel::brace_damping)
      .def_readwrite("attach_radius", &PlantModel::attach_radius)
      .def_readwrite("leg_inertia", &PlantModel::leg_inertia)
      .def_readwrite("leg_gravity", &PlantModel::leg_gravity)
      .def_readwrite("leg_stiffness", &PlantModel::leg_stiffness)
      .def_readwrite("leg_damping", &PlantModel::leg_damping)
      .def_readwrite("sensor_delay", &PlantModel::sensor_delay)
      .def_static("from_body", &PlantModel::from_body, py::arg("body"));

  py::class_<LoopTraces>(m, "LoopTraces")
      .def_readonly("dt", &LoopTraces::dt)
      .def_readonly("f_desired", &LoopTraces::f_desired)
      .def_readonly("f_filtered", &LoopTraces::f_filtered)
      .def_readonly("f_measured", &LoopTraces::f_measured)
      .def_readonly("vel_desired", &LoopTraces::vel_desired)
      .def_readonly("vel_command", &LoopTraces::vel_command)
      .def_readonly("motor_angle", &LoopTraces::motor_angle)
      .def_readonly("motor_vel", &LoopTraces::motor_vel)
      .def_readonly("leg_angle", &LoopTraces::leg_angle)
      .def_readonly("limited", &LoopTraces::limited);

  m.def("simulate_loop", &simulate_loop, py::arg("params"), py::arg("limits"),
        py::arg("plant"), py::arg("f_desired"), py::arg("substeps") = 10,
        py::call_guard<py::gil_scoped_release>(),
        "Closed-loop admittance force control on the rotary plant");

  py::class_<StepMetrics>(m, "StepMetrics")
      .def_readonly("steady_state", &StepMetrics::steady_state)
      .def_readonly("rise_time", &StepMetrics::rise_time)
      .def_readonly("overshoot_pct", &StepMetrics::overshoot_pct);

  m.def("step_metrics", &step_metrics, py::arg("y"), py::arg("dt"),
        "Steady state, 10-90% rise time, and overshoot of a step response");

  m.def("pva_limit", &pva_limit, py::arg("limits"), py::arg("commanded_vel"),
        py::arg("pos"), py::arg("vel"), py::arg("dt"),
        "Velocity command clamped to position/velocity/acceleration bounds");

  py::class_<FrfResult>(m, "FrfResult")
      .def_readonly("freq", &FrfResult::freq)
      .def_readonly("h", &FrfResult::h)
      .def_readonly("coherence", &FrfResult::coherence)
      .def_readonly("low_freq_gain", &FrfResult::low_freq_gain)
      .def_readonly("bandwidth_hz", &FrfResult::bandwidth_hz)
      .def_readonly("segments", &FrfResult::segments);

  m.def("frf_welch", &frf_welch, py::arg("input"), py::arg("output"),
        py::arg("fs"), py::arg("window") = 5000, py::arg("overlap") = 50,
        py::call_guard<py::gil_scoped_release>(),
        "Welch cross-spectral frequency response estimate with coherence");
}
