#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stlcbf/cli.hpp"
#include "stlcbf/parser.hpp"
#include "stlcbf/report.hpp"
#include "stlcbf/semantics.hpp"
#include "stlcbf/trajectory_io.hpp"

namespace py = pybind11;
using namespace stlcbf;

namespace {

Signal make_signal(const std::vector<double>& times,
                   const std::vector<Eigen::VectorXd>& states) {
  return Signal(times, states);
}

py::dict report_to_dict(const Report& rep) {
  py::dict d;
  d["verdict"] = verdict_name(rep.verdict);
  d["satisfied"] = rep.verdict == Verdict::Satisfied;
  d["movement_time"] = rep.movement_time;
  d["wall_clock"] = rep.wall_clock;
  d["replan_count"] = rep.replan_count;
  d["infeasible_count"] = rep.infeasible_count;
  d["violations"] = rep.violations;
  d["aborted"] = rep.aborted;
  py::list tasks;
  for (const auto& t : rep.tasks) {
    py::dict row;
    row["name"] = t.name;
    row["window"] = py::make_tuple(t.window.a, t.window.b);
    row["satisfied"] = t.satisfied;
    row["satisfied_at"] = t.satisfied ? py::object(py::float_(t.satisfied_at))
                                      : py::object(py::none());
    row["duration"] =
        t.satisfied ? py::object(py::float_(t.duration)) : py::object(py::none());
    tasks.append(row);
  }
  d["tasks"] = tasks;
  return d;
}

py::dict log_to_dict(const TrajectoryLog& log) {
  const std::size_t n = log.rows.size();
  std::vector<double> t(n), x(n), y(n), theta(n), speed(n), vmax(n), b(n);
  std::vector<int> task(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LogRow& r = log.rows[i];
    t[i] = r.t;
    x[i] = r.x.x();
    y[i] = r.x.y();
    theta[i] = r.x.z();
    speed[i] = r.speed;
    vmax[i] = r.vmax;
    b[i] = r.b;
    task[i] = r.active_task;
  }
  py::dict d;
  d["t"] = t;
  d["x"] = x;
  d["y"] = y;
  d["theta"] = theta;
  d["speed"] = speed;
  d["vmax"] = vmax;
  d["b"] = b;
  d["active_task"] = task;
  d["formula"] = log.formula_text;
  d["dt"] = log.dt;
  d["horizon"] = log.horizon;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Temporal-logic motion planning: STL parsing and monitoring, "
            "time-varying barriers, the per-step QP and the closed-loop simulator";

  py::register_exception<Error>(m, "PlanError");

  py::class_<Formula>(m, "Formula")
      .def("__repr__", [](const Formula& f) { return format_formula(f); })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def_property_readonly("horizon", [](const Formula& f) { return horizon(f); });

  m.def("parse_formula", &parse_formula, py::arg("text"),
        "Parse a formula such as 'F[0,10](ball([9,3], 0.2))'");
  m.def("format_formula", &format_formula, py::arg("formula"));
  m.def("horizon", &horizon, py::arg("formula"));

  m.def(
      "eval_boolean",
      [](const Formula& f, const std::vector<double>& times,
         const std::vector<Eigen::VectorXd>& states, double t) {
        return eval_boolean(f, make_signal(times, states), t, nullptr);
      },
      py::arg("formula"), py::arg("times"), py::arg("states"), py::arg("t") = 0.0,
      "Boolean satisfaction over a sampled trajectory");
  m.def(
      "eval_robustness",
      [](const Formula& f, const std::vector<double>& times,
         const std::vector<Eigen::VectorXd>& states, double t) {
        return eval_robustness(f, make_signal(times, states), t, nullptr);
      },
      py::arg("formula"), py::arg("times"), py::arg("states"), py::arg("t") = 0.0,
      "Quantitative satisfaction margin over a sampled trajectory");

  m.def(
      "solve_qp",
      [](const Eigen::Vector3d& a, double beta, double v_max,
         const Eigen::Vector3d& q_diag) -> py::object {
        QpProblem qp;
        qp.Q = q_diag.asDiagonal();
        qp.cbf_row = a;
        qp.rhs = beta;
        qp.planar_map << 1, 0, 0, 0, 1, 0;
        qp.v_max = v_max;
        const auto sol = solve_qp(qp);
        if (!sol) return py::none();
        py::dict d;
        d["u"] = sol->u;
        d["cost"] = sol->cost;
        d["kkt"] = sol->kkt;
        d["cbf_active"] = sol->cbf_active;
        d["speed_active"] = sol->speed_active;
        return d;
      },
      py::arg("a"), py::arg("beta"), py::arg("v_max"),
      py::arg("q_diag") = Eigen::Vector3d::Ones(),
      "Minimum-effort input meeting a.u >= beta under the planar speed cap; "
      "None when infeasible");

  m.def(
      "check_scenario",
      [](const std::string& path) {
        load_scenario(path);
        return true;
      },
      py::arg("path"), "Validate a scenario file, raising PlanError on violations");

  m.def(
      "run_scenario",
      [](const std::string& path, bool retime, std::optional<double> dt,
         std::optional<double> eta, std::optional<double> kappa) {
        ScenarioConfig cfg = load_scenario(path);
        cfg.sim.retime = retime;
        if (dt) cfg.sim.dt = *dt;
        if (eta) cfg.barrier.eta = *eta;
        if (kappa) cfg.barrier.kappa = *kappa;
        const RunResult res = run_scenario(cfg);
        py::dict d;
        d["report"] = report_to_dict(res.report);
        d["log"] = log_to_dict(res.log);
        return d;
      },
      py::arg("path"), py::arg("retime") = true, py::arg("dt") = std::nullopt,
      py::arg("eta") = std::nullopt, py::arg("kappa") = std::nullopt,
      "Run a scenario file and return its report and trajectory arrays");

  m.def(
      "report_from_csv",
      [](const std::string& path) {
        return report_to_dict(build_report(read_trajectory_csv(path)));
      },
      py::arg("path"), "Recompute a report from a trajectory.csv");
}
