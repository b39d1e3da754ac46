// mcsim: simulate, analyze, casestudy, export.
//
// Exit codes: 0 ok, 2 input error, 3 HC deadline miss, 4 internal invariant violation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcsim/casestudy.hpp"
#include "mcsim/engine.hpp"
#include "mcsim/snapshot.hpp"
#include "mcsim/taskset_io.hpp"
#include "mcsim/theorems.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kHcMiss = 3;
constexpr int kInvariant = 4;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

mcsim::Tick model_ticks(const std::string& text, const mcsim::TaskSet& ts) {
  try {
    return mcsim::to_ticks(mcsim::parse_quantity(text), ts.time_scale);
  } catch (const mcsim::ModelError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

std::vector<double> parse_p_range(const std::string& spec) {
  std::vector<double> out;
  if (auto c1 = spec.find(':'); c1 != std::string::npos) {
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw InputError("p range is lo:hi:step");
    const double lo = std::stod(spec.substr(0, c1));
    const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0 || hi < lo) throw InputError("bad p range " + spec);
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  } else {
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  }
  for (double p : out) {
    if (p < 0 || p > 1) throw InputError("overrun probability outside [0, 1]");
  }
  return out;
}

struct SimulateArgs {
  std::string taskset, algo = "multimode", script, snapshot, horizon, format = "csv", trace_out, metrics_out;
  std::string scan = "all";
  std::optional<double> p;
  std::uint64_t seed = 1;
  bool all_lo = false, all_hi = false, check = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto ts = mcsim::load_taskset_file(a.taskset);
  const int sources = (a.script.empty() ? 0 : 1) + (a.p ? 1 : 0) + (a.all_lo ? 1 : 0) + (a.all_hi ? 1 : 0);
  if (sources > 1) throw InputError("give exactly one scenario source (--script, --p, --all-lo, --all-hi)");
  mcsim::Scenario scenario = mcsim::Scenario::all_lo();
  if (!a.script.empty()) scenario = mcsim::Scenario::load_script_file(a.script, ts);
  else if (a.p) scenario = mcsim::Scenario::stochastic(a.seed, *a.p);
  else if (a.all_hi) scenario = mcsim::Scenario::all_hi();

  mcsim::SimOptions opts;
  opts.algorithm = mcsim::algorithm_from_string(a.algo);
  opts.check_invariants = a.check;
  if (a.scan == "lowest") opts.controller.scan = mcsim::SwitchScan::LowestPriority;
  else if (a.scan != "all") throw InputError("--scan is all or lowest");
  std::optional<mcsim::Snapshot> snap;
  if (!a.snapshot.empty()) snap = mcsim::load_snapshot_file(a.snapshot, ts);
  if (!a.horizon.empty()) {
    opts.horizon = model_ticks(a.horizon, ts);
    if (opts.horizon <= 0) throw InputError("horizon must be positive");
  }
  const auto format = mcsim::trace_format_from_string(a.format);
  opts.record_trace = !a.trace_out.empty();

  std::optional<mcsim::Engine> engine;
  if (snap) engine.emplace(ts, scenario, opts, *snap);
  else engine.emplace(ts, scenario, opts);
  auto result = engine->run();
  if (!a.trace_out.empty()) write_output(a.trace_out, mcsim::export_trace(result.trace, format));
  write_output(a.metrics_out, mcsim::metrics_json(result.metrics));
  return result.metrics.hc_misses() > 0 ? kHcMiss : kOk;
}

struct AnalyzeArgs {
  std::string taskset, theorem = "T1", snapshot, at, curve_out;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto ts = mcsim::load_taskset_file(a.taskset);
  mcsim::Snapshot snap;
  if (!a.snapshot.empty()) {
    snap = mcsim::load_snapshot_file(a.snapshot, ts);
  } else {
    snap = mcsim::synchronous_snapshot(ts, a.at.empty() ? 0 : model_ticks(a.at, ts));
  }
  const auto th = mcsim::theorem_from_string(a.theorem);
  const auto r = mcsim::schedulable(th, ts, snap);
  std::cout << mcsim::to_string(th) << " pivot=" << ts[r.pivot].id << " t=" << snap.t << ": "
            << (r.schedulable ? "schedulable" : "unschedulable");
  if (r.witness) std::cout << " witness z=" << *r.witness;
  std::cout << "\n";
  const auto csv = mcsim::demand_curve_csv(ts, r);
  if (a.curve_out.empty()) std::cout << csv;
  else write_output(a.curve_out, csv);
  return kOk;
}

struct CaseStudyArgs {
  std::string taskset, p_range = "0.01,0.0125,0.015", horizon, format = "markdown", out, csv_out;
  std::string scan = "all", algos = "fp,tasklevel,sld,multimode";
  std::size_t seeds = 20;
  std::uint64_t seed_base = 1;
  unsigned threads = 0;
};

int cmd_casestudy(const CaseStudyArgs& a) {
  const auto ts = mcsim::load_taskset_file(a.taskset);
  mcsim::CaseStudyConfig cfg;
  cfg.overrun_p = parse_p_range(a.p_range);
  cfg.seeds.clear();
  for (std::size_t i = 0; i < a.seeds; ++i) cfg.seeds.push_back(a.seed_base + i);
  if (!a.horizon.empty()) cfg.horizon = model_ticks(a.horizon, ts);
  cfg.threads = a.threads;
  if (a.scan == "lowest") cfg.controller.scan = mcsim::SwitchScan::LowestPriority;
  else if (a.scan != "all") throw InputError("--scan is all or lowest");
  cfg.algorithms.clear();
  std::stringstream names(a.algos);
  for (std::string name; std::getline(names, name, ',');) cfg.algorithms.push_back(mcsim::algorithm_from_string(name));
  if (cfg.algorithms.empty()) throw InputError("--algos is empty");
  const auto report = mcsim::run_case_study(ts, cfg);
  if (a.format == "csv") write_output(a.out, mcsim::case_study_csv(report));
  else if (a.format == "markdown") write_output(a.out, mcsim::case_study_markdown(report));
  else throw InputError("--format is markdown or csv");
  if (!a.csv_out.empty()) write_output(a.csv_out, mcsim::case_study_csv(report));
  return kOk;
}

struct ExportArgs {
  std::string trace, taskset, format = "gantt", out;
};

int cmd_export(const ExportArgs& a) {
  if (a.trace.empty() == a.taskset.empty()) throw InputError("give exactly one of --trace or --taskset");
  if (!a.taskset.empty()) {
    write_output(a.out, mcsim::serialize(mcsim::load_taskset_file(a.taskset)));
    return kOk;
  }
  const auto text = mcsim::read_text_file(a.trace);
  mcsim::Trace trace;
  try {
    trace = text.rfind("t,kind,", 0) == 0 ? mcsim::parse_csv(text) : mcsim::parse_jsonl(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("cannot parse trace: ") + e.what());
  }
  write_output(a.out, mcsim::export_trace(trace, mcsim::trace_format_from_string(a.format)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-criticality scheduling simulator"};
  app.set_config("--config", "", "TOML/INI file with option defaults; sections name subcommands");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run one simulation and write its trace and metrics");
  s->add_option("--taskset", sim.taskset, "Taskset file")->required();
  s->add_option("--algo", sim.algo, "fp | tasklevel | sld | multimode");
  s->add_option("--script", sim.script, "Scripted budgets file");
  s->add_option("--p", sim.p, "Per-job overrun probability (stochastic scenario)");
  s->add_option("--seed", sim.seed, "Seed for the stochastic scenario");
  s->add_flag("--all-lo", sim.all_lo, "Every job runs C_lo (default)");
  s->add_flag("--all-hi", sim.all_hi, "Every HC job runs C_hi");
  s->add_option("--snapshot", sim.snapshot, "Start from a snapshot instead of t=0");
  s->add_option("--horizon", sim.horizon, "Absolute end time in model units (default one hyperperiod)");
  s->add_option("--format", sim.format, "Trace format: csv | jsonl | gantt");
  s->add_option("--trace-out", sim.trace_out, "Trace output path ('-' for stdout)");
  s->add_option("--metrics-out", sim.metrics_out, "Metrics JSON path (default stdout)");
  s->add_option("--scan", sim.scan, "Critical-switch scan: all | lowest");
  s->add_flag("--check-invariants", sim.check, "Verify runtime invariants at every instant");

  AnalyzeArgs an;
  auto* z = app.add_subcommand("analyze", "Evaluate a schedulability theorem on a snapshot");
  z->add_option("--taskset", an.taskset, "Taskset file")->required();
  z->add_option("--theorem", an.theorem, "T1 | T2 | T3 | T4");
  z->add_option("--snapshot", an.snapshot, "Snapshot file (default: synchronous release)");
  z->add_option("--t", an.at, "Instant of the synchronous snapshot, model units");
  z->add_option("--curve-out", an.curve_out, "Demand curve CSV path (default stdout)");

  CaseStudyArgs cs;
  auto* c = app.add_subcommand("casestudy", "Compare algorithms over stochastic scenarios");
  c->add_option("--taskset", cs.taskset, "Taskset file")->required();
  c->add_option("--p-range", cs.p_range, "lo:hi:step or a comma list");
  c->add_option("--seeds", cs.seeds, "Number of seeds per probability");
  c->add_option("--seed-base", cs.seed_base, "First seed");
  c->add_option("--horizon", cs.horizon, "Horizon in model units (default one hyperperiod)");
  c->add_option("--threads", cs.threads, "Worker threads (default: all cores)");
  c->add_option("--format", cs.format, "markdown | csv");
  c->add_option("--out", cs.out, "Report path (default stdout)");
  c->add_option("--csv-out", cs.csv_out, "Also write per-run CSV here");
  c->add_option("--scan", cs.scan, "Critical-switch scan: all | lowest");
  c->add_option("--algos", cs.algos, "Comma list of fp, tasklevel, sld, multimode");

  ExportArgs ex;
  auto* e = app.add_subcommand("export", "Convert a recorded trace, or print a taskset in canonical form");
  e->add_option("--trace", ex.trace, "Trace file (csv or jsonl)");
  e->add_option("--taskset", ex.taskset, "Taskset file");
  e->add_option("--format", ex.format, "csv | jsonl | gantt");
  e->add_option("--out", ex.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kInputError;
  }

  try {
    if (s->parsed()) return cmd_simulate(sim);
    if (z->parsed()) return cmd_analyze(an);
    if (c->parsed()) return cmd_casestudy(cs);
    if (e->parsed()) return cmd_export(ex);
  } catch (const mcsim::InvariantViolation& err) {
    std::cerr << "invariant violation: " << err.what() << "\n";
    return kInvariant;
  } catch (const std::logic_error& err) {
    if (dynamic_cast<const std::invalid_argument*>(&err) == nullptr) {
      std::cerr << "internal error: " << err.what() << "\n";
      return kInvariant;
    }
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
