#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "otg/testkit.hpp"
#include "otg/trajectory.hpp"

namespace py = pybind11;
using namespace otg;

namespace {

InputParameters make_input(std::size_t dof, const std::vector<KinematicState>& current,
                           const std::vector<KinematicState>& target,
                           const std::vector<Limits>& limits) {
    InputParameters in;
    in.dof_count = dof;
    in.current = current;
    in.target = target;
    in.limits = limits;
    return in;
}

}  // namespace

PYBIND11_MODULE(_otg, m) {
    m.doc() = "Time-optimal jerk-limited online trajectory generation";

    py::class_<KinematicState>(m, "KinematicState")
        .def(py::init<>())
        .def(py::init([](double p, double v, double a) {
                 return KinematicState{p, v, a};
             }),
             py::arg("position") = 0.0, py::arg("velocity") = 0.0, py::arg("acceleration") = 0.0)
        .def_readwrite("position", &KinematicState::p)
        .def_readwrite("velocity", &KinematicState::v)
        .def_readwrite("acceleration", &KinematicState::a)
        .def("__repr__", [](const KinematicState& s) {
            return "KinematicState(p=" + std::to_string(s.p) + ", v=" + std::to_string(s.v) +
                   ", a=" + std::to_string(s.a) + ")";
        });

    py::class_<Limits>(m, "Limits")
        .def(py::init<>())
        .def(py::init([](double v_max, double a_max, double j_max, double v_min, double a_min) {
                 Limits l;
                 l.v_max = v_max;
                 l.a_max = a_max;
                 l.j_max = j_max;
                 l.v_min = std::isnan(v_min) ? -v_max : v_min;
                 l.a_min = std::isnan(a_min) ? -a_max : a_min;
                 return l;
             }),
             py::arg("max_velocity"), py::arg("max_acceleration"), py::arg("max_jerk"),
             py::arg("min_velocity") = std::nan(""), py::arg("min_acceleration") = std::nan(""))
        .def_readwrite("min_velocity", &Limits::v_min)
        .def_readwrite("max_velocity", &Limits::v_max)
        .def_readwrite("min_acceleration", &Limits::a_min)
        .def_readwrite("max_acceleration", &Limits::a_max)
        .def_readwrite("max_jerk", &Limits::j_max);

    py::class_<InputParameters>(m, "InputParameters")
        .def(py::init(&make_input), py::arg("dof_count"), py::arg("current"), py::arg("target"),
             py::arg("limits"))
        .def_readwrite("dof_count", &InputParameters::dof_count)
        .def_readwrite("current", &InputParameters::current)
        .def_readwrite("target", &InputParameters::target)
        .def_readwrite("limits", &InputParameters::limits);

    py::class_<BlockedInterval>(m, "BlockedInterval")
        .def_readonly("start", &BlockedInterval::start)
        .def_readonly("end", &BlockedInterval::end);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("duration", &Trajectory::duration)
        .def_readonly("limiting_dof", &Trajectory::limiting_dof)
        .def_property_readonly("independent_min_durations",
                               [](const Trajectory& t) {
                                   std::vector<double> out;
                                   for (const DofTrajectory& d : t.dofs) {
                                       out.push_back(d.t_min);
                                   }
                                   return out;
                               })
        .def_property_readonly("brake_durations",
                               [](const Trajectory& t) {
                                   std::vector<double> out;
                                   for (const DofTrajectory& d : t.dofs) {
                                       out.push_back(d.brake.duration());
                                   }
                                   return out;
                               })
        .def("at_time", [](const Trajectory& t, double time) {
            std::vector<KinematicState> states(t.dofs.size());
            std::vector<double> jerks(t.dofs.size());
            t.at_time(time, states, jerks);
            return py::make_tuple(states, jerks);
        });

    m.def(
        "validate_input",
        [](const InputParameters& in) {
            const ValidationResult r = validate_input(in);
            return py::make_tuple(r.ok, r.message);
        },
        "Check input invariants; returns (ok, message).");

    m.def(
        "calculate",
        [](const InputParameters& in) {
            CalcResult r = calculate(in);
            if (!r.ok()) {
                throw std::invalid_argument(r.message);
            }
            return r.trajectory;
        },
        "Compute a time-optimal synchronized trajectory.");

    m.def(
        "calculate_velocity",
        [](const InputParameters& in) {
            CalcResult r = calculate_velocity_trajectory(in);
            if (!r.ok()) {
                throw std::invalid_argument(r.message);
            }
            return r.trajectory;
        },
        "Velocity-control interface: reach (v_f, a_f) ignoring positions.");

    py::class_<Generator>(m, "Generator")
        .def(py::init<std::size_t>(), py::arg("dof_count"))
        .def(
            "update",
            [](Generator& g, const InputParameters& in, double cycle) {
                const UpdateResult u = g.update(in, cycle);
                std::vector<KinematicState> states(u.states.begin(), u.states.end());
                std::vector<double> jerks(u.jerks.begin(), u.jerks.end());
                return py::make_tuple(states, jerks, u.recomputed, u.finished);
            },
            py::arg("input"), py::arg("cycle"),
            "Advance one control period; returns (states, jerks, recomputed, finished).")
        .def_property_readonly("trajectory", &Generator::trajectory);
}
