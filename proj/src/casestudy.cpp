#include "mcsim/casestudy.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace mcsim {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

const CaseStudyRun* CaseStudyReport::find(Algorithm a, double p, std::uint64_t seed) const {
  for (const auto& r : runs) {
    if (r.algorithm == a && r.overrun_p == p && r.seed == seed) return &r;
  }
  return nullptr;
}

bool CaseStudyReport::dominance_holds() const {
  for (const auto& r : runs) {
    if (r.algorithm != Algorithm::Multimode) continue;
    const auto* sld = find(Algorithm::SystemLevelDrop, r.overrun_p, r.seed);
    const auto* tl = find(Algorithm::TaskLevelOnly, r.overrun_p, r.seed);
    if (sld && r.metrics.discard_rate() > sld->metrics.discard_rate()) return false;
    if (tl && r.metrics.hc_misses() > tl->metrics.hc_misses()) return false;
  }
  return true;
}

CaseStudyReport run_case_study(const TaskSet& ts, const CaseStudyConfig& config) {
  struct Job {
    Algorithm algorithm;
    double p;
    std::uint64_t seed;
  };
  std::vector<Job> work;
  for (double p : config.overrun_p) {
    for (auto seed : config.seeds) {
      for (auto a : config.algorithms) work.push_back({a, p, seed});
    }
  }

  CaseStudyReport report;
  report.runs.resize(work.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      try {
        SimOptions opts;
        opts.algorithm = work[i].algorithm;
        opts.horizon = config.horizon;
        opts.controller = config.controller;
        opts.record_trace = false;
        auto result = simulate(ts, Scenario::stochastic(work[i].seed, work[i].p), opts);
        report.runs[i] = {work[i].algorithm, work[i].p, work[i].seed, std::move(result.metrics)};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  unsigned n = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  for (auto a : config.algorithms) {
    AlgorithmSummary s;
    s.algorithm = a;
    std::vector<bool> missed(ts.size(), false);
    double total = 0.0;
    for (const auto& r : report.runs) {
      if (r.algorithm != a) continue;
      const double rate = r.metrics.discard_rate();
      s.discard_min = s.runs == 0 ? rate : std::min(s.discard_min, rate);
      s.discard_max = s.runs == 0 ? rate : std::max(s.discard_max, rate);
      total += rate;
      ++s.runs;
      s.hc_misses += r.metrics.hc_misses();
      s.lc_misses += r.metrics.lc_misses();
      if (r.metrics.hc_misses() > 0) ++s.runs_with_hc_miss;
      s.critical_switches += r.metrics.critical_switches;
      s.task_mode_switches += r.metrics.task_mode_switches;
      s.dem_evaluations += r.metrics.dem_evaluations;
      s.filter_set_total += r.metrics.filter_set_total;
      for (std::size_t i = 0; i < r.metrics.tasks.size(); ++i) {
        if (r.metrics.tasks[i].deadline_misses > 0) missed[i] = true;
      }
    }
    if (s.runs > 0) s.discard_mean = total / static_cast<double>(s.runs);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (missed[i]) s.missing_tasks.push_back(ts[i].id);
    }
    report.summary.push_back(std::move(s));
  }
  return report;
}

std::string case_study_csv(const CaseStudyReport& report) {
  std::ostringstream os;
  os << "algorithm,p,seed,hc_misses,lc_misses,lc_released,lc_discarded,discard_rate,critical_switches,"
        "task_mode_switches,dem_evaluations,filter_set_total\n";
  for (const auto& r : report.runs) {
    const auto& m = r.metrics;
    os << cli_name(r.algorithm) << ',' << fixed(r.overrun_p, 4) << ',' << r.seed << ',' << m.hc_misses() << ','
       << m.lc_misses() << ',' << m.lc_released() << ',' << m.lc_discarded() << ',' << fixed(m.discard_rate(), 6)
       << ',' << m.critical_switches << ',' << m.task_mode_switches << ',' << m.dem_evaluations << ','
       << m.filter_set_total << '\n';
  }
  return os.str();
}

std::string case_study_markdown(const CaseStudyReport& report) {
  std::ostringstream os;
  os << "| algorithm | runs | HC misses | runs with HC miss | LC misses | discard min % | discard mean % | "
        "discard max % | critical switches | task mode switches | DEM evaluations | filter-set total | "
        "missing tasks |\n";
  os << "|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& s : report.summary) {
    std::string missing;
    for (const auto& id : s.missing_tasks) missing += (missing.empty() ? "" : " ") + id;
    os << "| " << to_string(s.algorithm) << " | " << s.runs << " | " << s.hc_misses << " | " << s.runs_with_hc_miss
       << " | " << s.lc_misses << " | " << fixed(100 * s.discard_min, 2) << " | " << fixed(100 * s.discard_mean, 2)
       << " | " << fixed(100 * s.discard_max, 2) << " | " << s.critical_switches << " | " << s.task_mode_switches
       << " | " << s.dem_evaluations << " | " << s.filter_set_total << " | " << (missing.empty() ? "-" : missing)
       << " |\n";
  }
  os << "\nDominance (Multimode vs SystemLevelDrop discards, vs TaskLevelOnly HC misses): "
     << (report.dominance_holds() ? "holds" : "VIOLATED") << "\n";
  return os.str();
}

}  // namespace mcsim
