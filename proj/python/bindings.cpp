#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mcsim/casestudy.hpp"
#include "mcsim/engine.hpp"
#include "mcsim/taskset_io.hpp"
#include "mcsim/theorems.hpp"

namespace py = pybind11;
using namespace mcsim;

namespace {

py::object json_to_py(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

Scenario make_scenario(const TaskSet& ts, const std::string& kind, std::optional<std::string> script,
                       std::uint64_t seed, double p) {
  if (script) return Scenario::parse_script(*script, ts);
  if (kind == "all-lo") return Scenario::all_lo();
  if (kind == "all-hi") return Scenario::all_hi();
  if (kind == "stochastic") return Scenario::stochastic(seed, p);
  throw std::invalid_argument("scenario is all-lo, all-hi or stochastic (or pass script=)");
}

}  // namespace

PYBIND11_MODULE(mcsim, m) {
  m.doc() = "Elastic multimode mixed-criticality scheduling simulator";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::class_<Task>(m, "Task")
      .def_readonly("id", &Task::id)
      .def_readonly("period", &Task::period)
      .def_readonly("wcet_lo", &Task::wcet_lo)
      .def_readonly("wcet_hi", &Task::wcet_hi)
      .def_readonly("priority", &Task::priority)
      .def_property_readonly("hc", &Task::is_hc)
      .def("__repr__", [](const Task& t) {
        return "<Task " + t.id + " T=" + std::to_string(t.period) + " C=" + std::to_string(t.wcet_lo) + "/" +
               std::to_string(t.wcet_hi) + (t.is_hc() ? " HC" : " LC") + ">";
      });

  py::class_<TaskSet>(m, "TaskSet")
      .def_readonly("tasks", &TaskSet::tasks)
      .def_readonly("time_scale", &TaskSet::time_scale)
      .def("hyperperiod", &TaskSet::hyperperiod)
      .def("serialize", [](const TaskSet& ts) { return serialize(ts); })
      .def("__len__", &TaskSet::size);

  m.def("parse_taskset", [](const std::string& text) { return load_taskset(text); }, py::arg("text"));
  m.def("load_taskset", &load_taskset_file, py::arg("path"));

  py::class_<TraceEvent>(m, "TraceEvent")
      .def_readonly("t", &TraceEvent::t)
      .def_property_readonly("kind", [](const TraceEvent& e) { return std::string(to_string(e.kind)); })
      .def_readonly("task", &TraceEvent::task)
      .def_readonly("job", &TraceEvent::job)
      .def_readonly("value", &TraceEvent::value)
      .def_readonly("info", &TraceEvent::info)
      .def("__repr__", [](const TraceEvent& e) {
        return "<TraceEvent " + std::to_string(e.t) + " " + to_string(e.kind) + " " + e.task + ">";
      });

  m.def(
      "simulate",
      [](const TaskSet& ts, const std::string& algorithm, const std::string& scenario,
         std::optional<std::string> script, std::uint64_t seed, double p, Tick horizon,
         std::optional<std::string> snapshot, bool check_invariants) {
        SimOptions opts;
        opts.algorithm = algorithm_from_string(algorithm);
        opts.horizon = horizon;
        opts.check_invariants = check_invariants;
        const auto s = make_scenario(ts, scenario, script, seed, p);
        SimResult r;
        {
          py::gil_scoped_release release;
          if (snapshot) {
            Engine e(ts, s, opts, parse_snapshot(*snapshot, ts));
            r = e.run();
          } else {
            r = simulate(ts, s, opts);
          }
        }
        py::dict out;
        out["trace"] = r.trace;
        out["metrics"] = json_to_py(metrics_json(r.metrics));
        return out;
      },
      py::arg("taskset"), py::arg("algorithm") = "multimode", py::arg("scenario") = "all-lo",
      py::arg("script") = py::none(), py::arg("seed") = 1, py::arg("p") = 0.05, py::arg("horizon") = 0,
      py::arg("snapshot") = py::none(), py::arg("check_invariants") = false,
      "Runs one simulation. Returns {'trace': [TraceEvent], 'metrics': dict}. Horizon is in ticks; 0 means one "
      "hyperperiod.");

  m.def(
      "export_trace",
      [](const Trace& trace, const std::string& format) { return export_trace(trace, trace_format_from_string(format)); },
      py::arg("trace"), py::arg("format") = "csv");

  m.def(
      "analyze",
      [](const TaskSet& ts, const std::string& theorem, std::optional<std::string> snapshot) {
        const auto snap = snapshot ? parse_snapshot(*snapshot, ts) : synchronous_snapshot(ts, 0);
        const auto r = schedulable(theorem_from_string(theorem), ts, snap);
        py::dict out;
        out["schedulable"] = r.schedulable;
        out["pivot"] = ts[r.pivot].id;
        out["witness"] = r.witness ? py::cast(*r.witness) : py::none();
        py::list curve;
        for (const auto& pt : r.curve) curve.append(py::make_tuple(pt.z, pt.demand));
        out["curve"] = curve;
        return out;
      },
      py::arg("taskset"), py::arg("theorem") = "T1", py::arg("snapshot") = py::none(),
      "Evaluates a schedulability theorem; the snapshot defaults to the synchronous release at t=0.");

  m.def(
      "case_study",
      [](const TaskSet& ts, std::vector<double> p_values, std::vector<std::uint64_t> seeds, Tick horizon,
         std::vector<std::string> algorithms, unsigned threads) {
        CaseStudyConfig cfg;
        cfg.overrun_p = std::move(p_values);
        cfg.seeds = std::move(seeds);
        cfg.horizon = horizon;
        cfg.threads = threads;
        if (!algorithms.empty()) {
          cfg.algorithms.clear();
          for (const auto& a : algorithms) cfg.algorithms.push_back(algorithm_from_string(a));
        }
        CaseStudyReport report;
        {
          py::gil_scoped_release release;
          report = run_case_study(ts, cfg);
        }
        py::dict out;
        out["csv"] = case_study_csv(report);
        out["markdown"] = case_study_markdown(report);
        out["dominance_holds"] = report.dominance_holds();
        return out;
      },
      py::arg("taskset"), py::arg("p_values"), py::arg("seeds"), py::arg("horizon") = 0,
      py::arg("algorithms") = std::vector<std::string>{}, py::arg("threads") = 0);
}
