#pragma once

#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "mcsim/engine.hpp"

namespace mcsim {

struct CaseStudyConfig {
  std::vector<double> overrun_p{0.05};
  std::vector<std::uint64_t> seeds{1};
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  Tick horizon = 0;      // 0 means one hyperperiod
  unsigned threads = 0;  // 0 means one per hardware thread
  ControllerOptions controller;
};

struct CaseStudyRun {
  Algorithm algorithm = Algorithm::Multimode;
  double overrun_p = 0.0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::Multimode;
  std::int64_t runs = 0;
  std::int64_t hc_misses = 0;
  std::int64_t runs_with_hc_miss = 0;
  std::int64_t lc_misses = 0;
  double discard_min = 0.0;
  double discard_max = 0.0;
  double discard_mean = 0.0;
  std::int64_t critical_switches = 0;
  std::int64_t task_mode_switches = 0;
  std::int64_t dem_evaluations = 0;
  std::int64_t filter_set_total = 0;
  std::vector<std::string> missing_tasks;  // union over runs, taskset order
};

struct CaseStudyReport {
  std::vector<CaseStudyRun> runs;  // ordered by (p, seed, algorithm)
  std::vector<AlgorithmSummary> summary;

  const CaseStudyRun* find(Algorithm a, double p, std::uint64_t seed) const;
  // For every (p, seed): Multimode discards no more than SystemLevelDrop
  // and misses no more HC deadlines than TaskLevelOnly.
  bool dominance_holds() const;
};

// Runs every algorithm on every (p, seed) stochastic scenario, spread over
// worker threads. Runs share nothing mutable.
CaseStudyReport run_case_study(const TaskSet& ts, const CaseStudyConfig& config);

// algorithm,p,seed,hc_misses,lc_misses,lc_released,lc_discarded,discard_rate,critical_switches,task_mode_switches,dem_evaluations,filter_set_total
std::string case_study_csv(const CaseStudyReport& report);
// One row per algorithm.
std::string case_study_markdown(const CaseStudyReport& report);

}  // namespace mcsim
