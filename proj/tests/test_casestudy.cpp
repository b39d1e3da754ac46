#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "mcsim/casestudy.hpp"

using namespace mcsim;

namespace {

CaseStudyReport small_study(unsigned threads) {
  CaseStudyConfig cfg;
  cfg.overrun_p = {0.05, 0.2};
  cfg.seeds = {1, 2, 3};
  cfg.horizon = 100000;
  cfg.threads = threads;
  return run_case_study(test::table2(), cfg);
}

}  // namespace

TEST(CaseStudy, CoversEveryAlgorithmPointAndSeed) {
  const auto report = small_study(4);
  EXPECT_EQ(report.runs.size(), 2u * 3u * 4u);
  ASSERT_EQ(report.summary.size(), 4u);
  for (const auto& s : report.summary) {
    EXPECT_EQ(s.runs, 6);
    EXPECT_LE(s.discard_min, s.discard_mean);
    EXPECT_LE(s.discard_mean, s.discard_max);
  }
  ASSERT_NE(report.find(Algorithm::Multimode, 0.2, 3), nullptr);
  EXPECT_EQ(report.find(Algorithm::Multimode, 0.3, 3), nullptr);
}

TEST(CaseStudy, ThreadCountDoesNotChangeResults) {
  EXPECT_EQ(case_study_csv(small_study(1)), case_study_csv(small_study(8)));
}

TEST(CaseStudy, ReportsRender) {
  const auto report = small_study(0);
  const auto csv = case_study_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "algorithm,p,seed,hc_misses,lc_misses,lc_released,lc_discarded,discard_rate,critical_switches,"
            "task_mode_switches,dem_evaluations,filter_set_total");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 25);
  const auto md = case_study_markdown(report);
  EXPECT_NE(md.find("| Multimode |"), std::string::npos);
  EXPECT_NE(md.find("Dominance"), std::string::npos);
}

TEST(CaseStudy, FixedPriorityNeverDiscards) {
  const auto report = small_study(0);
  for (const auto& r : report.runs) {
    if (r.algorithm == Algorithm::FPClassic || r.algorithm == Algorithm::TaskLevelOnly) {
      EXPECT_EQ(r.metrics.lc_discarded(), 0);
    }
  }
}
