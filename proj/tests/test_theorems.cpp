#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mcsim/engine.hpp"
#include "mcsim/theorems.hpp"

using namespace mcsim;
using mcsim::test::idx;

TEST(Theorem1, Table2SchedulableAtSynchronousRelease) {
  const auto ts = test::table2();
  const auto r = schedulable(Theorem::T1_Normal, ts, synchronous_snapshot(ts, 0));
  EXPECT_TRUE(r.schedulable);
  EXPECT_EQ(ts[r.pivot].id, "pi5");
  EXPECT_FALSE(r.witness.has_value());
  EXPECT_FALSE(r.curve.empty());
}

TEST(Theorem1, Table1SchedulableAtSynchronousRelease) {
  const auto ts = test::table1();
  const auto r = schedulable(Theorem::T1_Normal, ts, synchronous_snapshot(ts, 0));
  EXPECT_TRUE(r.schedulable);
  EXPECT_EQ(ts[r.pivot].id, "pi2");
  ASSERT_EQ(r.curve.size(), 1u);
  EXPECT_EQ(r.curve[0].z, 20);
  EXPECT_EQ(r.curve[0].demand, 19);
}

TEST(Theorem1, OversizedTaskFailsWithWitness) {
  TaskSet ts;
  ts.tasks.push_back({"big", 10, 12, 12, Criticality::HC, 1});
  const auto r = schedulable(Theorem::T1_Normal, ts, synchronous_snapshot(ts, 0));
  EXPECT_FALSE(r.schedulable);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, 10);
}

TEST(Theorem1, NoLoTaskIsInapplicable) {
  const auto ts = test::table1();
  auto snap = synchronous_snapshot(ts, 0);
  snap.jobs[idx(ts, "pi1")].omega = TaskMode::HI;
  snap.jobs[idx(ts, "pi2")].omega = TaskMode::HI;
  try {
    schedulable(Theorem::T1_Normal, ts, snap);
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.kind(), AnalysisErrorKind::Inapplicable);
    EXPECT_NE(std::string(e.what()).find("theorem inapplicable"), std::string::npos);
  }
}

TEST(Theorem2, Table1AllHiAgreesWithSimulation) {
  const auto ts = test::table1();
  const auto snap = parse_snapshot("all_omega = HI\n", ts);
  const auto r = schedulable(Theorem::T2_AllHI, ts, snap);
  EXPECT_EQ(ts[r.pivot].id, "pi2");
  EXPECT_TRUE(r.schedulable);
  SimOptions opts;
  opts.algorithm = Algorithm::Multimode;
  opts.horizon = 10 * ts.hyperperiod();
  const auto sim = simulate(ts, Scenario::all_hi(), opts);
  EXPECT_EQ(sim.metrics.hc_misses(), 0);
}

TEST(Theorem2, GuardRequiresEveryHcTaskInHi) {
  const auto ts = test::table1();
  EXPECT_THROW(schedulable(Theorem::T2_AllHI, ts, synchronous_snapshot(ts, 0)), AnalysisError);
}

TEST(Theorem3, Fig5ShrinkWindow) {
  const auto ts = test::fig5();
  auto snap = load_snapshot_file(test::fixture("fig5.snapshot"), ts);
  try {
    schedulable(Theorem::T3_Shrinking, ts, snap);
    FAIL();
  } catch (const AnalysisError& e) {
    EXPECT_EQ(e.kind(), AnalysisErrorKind::GuardMismatch);
  }
  snap.system.pattern = Pattern::Shrinking;
  const auto r = schedulable(Theorem::T3_Shrinking, ts, snap);
  EXPECT_TRUE(r.schedulable);
  EXPECT_EQ(r.curve.front().z, 750);
  EXPECT_EQ(r.curve.front().demand, 2 * 60 + 3 * 30 + 90);
}

TEST(Theorem4, CriticalSnapshot) {
  const auto ts = test::table1();
  const auto snap = parse_snapshot(
      "t = 30\nmode = Critical\npattern = Stretching\ntrigger = pi2 offset=10\n"
      "job pi1 release=20 deadline=40 lambda=5 omega=HI budget=7\n",
      ts);
  const auto r = schedulable(Theorem::T4_Critical, ts, snap);
  EXPECT_EQ(ts[r.pivot].id, "pi2");
  EXPECT_TRUE(r.schedulable);
  EXPECT_EQ(r.curve.front().demand, 2 + 6);
  EXPECT_THROW(schedulable(Theorem::T4_Critical, ts, synchronous_snapshot(ts, 0)), AnalysisError);
}

TEST(Theorems, NamesAndCurveCsv) {
  EXPECT_EQ(theorem_from_string("T3"), Theorem::T3_Shrinking);
  EXPECT_EQ(theorem_from_string("T4_Critical"), Theorem::T4_Critical);
  EXPECT_THROW(theorem_from_string("T9"), std::invalid_argument);
  const auto ts = test::table1();
  const auto r = schedulable(Theorem::T1_Normal, ts, synchronous_snapshot(ts, 0));
  EXPECT_EQ(demand_curve_csv(ts, r), "pivot,t,z,demand,supply,schedulable\npi2,0,20,19,20,1\n");
}

TEST(Theorems, CandidatesFollowPivotDeadlineChain) {
  const auto ts = test::table2();
  const auto snap = synchronous_snapshot(ts, 0);
  const auto z = candidate_lengths(ts, idx(ts, "pi5"), snap);
  ASSERT_FALSE(z.empty());
  EXPECT_EQ(z.front(), 2000);
  EXPECT_EQ(z.back(), ts.hyperperiod());
  for (std::size_t i = 1; i < z.size(); ++i) EXPECT_EQ(z[i] - z[i - 1], 2000);
}
