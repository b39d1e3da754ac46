#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "mcsim/snapshot.hpp"
#include "mcsim/workload.hpp"
#include "oracle.hpp"
#include "random_taskset.hpp"

using namespace mcsim;
using mcsim::test::idx;

TEST(Psi, HighBranches) {
  EXPECT_EQ(psi(7, 20, 0, {0, 0}), 7);
  EXPECT_EQ(psi(7, 20, 0, {0, 20}), 14);
  EXPECT_EQ(psi(7, 20, 5, {0, 27}), 16);
  Task t{"h", 20, 5, 7, Criticality::HC, 1};
  EXPECT_EQ(psi_hi(t, 5, {0, 27}), 16);
}

TEST(Psi, LowBranches) {
  Task t{"l", 20, 5, 5, Criticality::LC, 1};
  EXPECT_EQ(psi_lo(t, 0, {0, 0}), 5);
  EXPECT_EQ(psi_lo(t, 2, {0, 25}), 13);
  EXPECT_EQ(psi_lo(t, 0, {0, 24}), 10);
  EXPECT_THROW(psi(5, 20, 0, {5, 4}), std::invalid_argument);
}

TEST(Psi, CeilBranchNeverBelowFloorBranch) {
  for (Tick period = 1; period <= 25; ++period) {
    for (Tick c = 1; c <= period; ++c) {
      for (Tick z = 0; z <= 3 * period; ++z) {
        const Tick floor_jobs = z / period;
        const Tick ceil_jobs = (z + period - 1) / period;
        EXPECT_GE(ceil_jobs, floor_jobs);
        const Tick expected = c + c * ((z % period >= c) ? ceil_jobs : floor_jobs);
        ASSERT_EQ(psi(c, period, 0, {0, z}), expected) << "T=" << period << " C=" << c << " z=" << z;
      }
    }
  }
}

TEST(Interference, CurrentJobThenLaterReleases) {
  Task t{"l", 20, 5, 5, Criticality::LC, 1};
  JobState j;
  j.release = 0;
  j.abs_deadline = 20;
  j.lambda = 2;
  EXPECT_EQ(interference(t, j, TaskMode::LO, 3, 45), 3 + 5 + 5);
  j.status = JobStatus::Done;
  EXPECT_EQ(interference(t, j, TaskMode::LO, 3, 45), 10);
  EXPECT_EQ(interference(t, j, TaskMode::LO, 3, 44), 5);
  JobState future;
  future.release = 30;
  future.abs_deadline = 50;
  EXPECT_EQ(interference(t, future, TaskMode::LO, 3, 45), 5);
  EXPECT_EQ(interference(t, future, TaskMode::LO, 3, 30), 0);
}

TEST(Aggregates, Table1AtSynchronousRelease) {
  const auto ts = test::table1();
  const auto snap = synchronous_snapshot(ts, 0);
  const std::size_t pi2 = idx(ts, "pi2");
  DemandQuery q{pi2, 0, snap.jobs};
  EXPECT_EQ(w_h_hi(ts, q), 0);
  // Only pi1's current job fits before pi2's deadline; the literal
  // relative-interval expression would also count the release at 20.
  EXPECT_EQ(w_h_lo(ts, q), 5);
  EXPECT_EQ(psi_lo(ts[idx(ts, "pi1")], 0, {0, 20}), 10);
  EXPECT_EQ(w_l(ts, q), 5 + 4);
  EXPECT_EQ(dem(ts, q), 19);

  DemandQuery top{idx(ts, "pi3"), 0, snap.jobs};
  EXPECT_EQ(w_h_lo(ts, top), 0);
  EXPECT_EQ(w_l(ts, top), 0);
}

TEST(Aggregates, AllOtherHcInHiLeavesNoLoInterference) {
  const auto ts = test::table2();
  auto snap = synchronous_snapshot(ts, 0);
  const std::size_t pivot = idx(ts, "pi5");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].is_hc() && i != pivot) snap.jobs[i].omega = TaskMode::HI;
  }
  DemandQuery q{pivot, 0, snap.jobs};
  EXPECT_EQ(w_h_lo(ts, q), 0);
  EXPECT_GT(w_h_hi(ts, q), 0);
}

TEST(Aggregates, Fig4OverrunInstant) {
  // State at t=30 of the scripted run: pi1 has consumed 5 of 7 and switched to HI.
  const auto ts = test::table1();
  auto snap = synchronous_snapshot(ts, 20);
  const std::size_t pi1 = idx(ts, "pi1"), pi2 = idx(ts, "pi2"), pi3 = idx(ts, "pi3");
  snap.jobs[pi3].lambda = 5;
  snap.jobs[pi3].status = JobStatus::Done;
  snap.jobs[pi1].lambda = 5;
  snap.jobs[pi1].budget = 7;
  snap.jobs[pi1].omega = TaskMode::HI;
  DemandQuery q{pi2, 30, snap.jobs};
  // Only pi1's remaining 2 units fall before 40; the literal relative
  // interval [10, 20] would also count a whole job.
  EXPECT_EQ(w_h_hi(ts, q), 2);
  EXPECT_EQ(psi_hi(ts[pi1], 5, {10, 20}), 9);
  EXPECT_EQ(dem(ts, q), 2 + 4 + 5);
  EXPECT_GE(dem(ts, q), snap.jobs[pi2].abs_deadline - 30);
}

TEST(Dem, SingleTaskAndLowerBound) {
  TaskSet ts;
  ts.tasks.push_back({"h", 10, 3, 5, Criticality::HC, 1});
  const auto snap = synchronous_snapshot(ts, 0);
  EXPECT_EQ(dem(ts, {0, 0, snap.jobs}), 3);
  EXPECT_EQ(dem_c(ts, {0, 0, snap.jobs}), 5);
  auto done = snap;
  done.jobs[0].lambda = 5;
  done.jobs[0].status = JobStatus::Done;
  EXPECT_EQ(dem_c(ts, {0, 2, done.jobs}), 0);
}

TEST(Shrink, MuValues) {
  EXPECT_EQ(shrink_mu(185, 120, 250), Rational(60));
  EXPECT_EQ(shrink_mu(370, 120, 250), Rational(120));
  EXPECT_EQ(shrink_mu(370, 0, 250), Rational(0));
  EXPECT_THROW(shrink_mu(370, 10, 0), std::invalid_argument);
  EXPECT_THROW(shrink_mu(370, -1, 10), std::invalid_argument);
  // Fig. 5 at time_scale 30: mu = 6 and 4 units, shrunk periods tile [5, 30].
  const auto ts = test::fig5();
  const Tick window = 30 * 25, delta = 30 * 12;
  const auto mu1 = shrink_mu(ts[idx(ts, "l1")].period, delta, window);
  const auto mu2 = shrink_mu(ts[idx(ts, "l2")].period, delta, window);
  EXPECT_EQ(mu1, Rational(180));
  EXPECT_EQ(mu2, Rational(120));
  EXPECT_EQ((Rational(ts[idx(ts, "l1")].period) - mu1) * 2, Rational(window));
  EXPECT_EQ((Rational(ts[idx(ts, "l2")].period) - mu2) * 3, Rational(window));
}

TEST(Shrink, TilingProperty) {
  for (Tick period = 2; period <= 40; ++period) {
    for (Tick window = 1; window <= 60; window += 7) {
      for (Tick delta = 0; delta <= 30; delta += 5) {
        const auto mu = shrink_mu(period, delta, window);
        const Rational shrunk = Rational(period) - mu;
        const auto n = ceil_div(Rational(window), shrunk);
        EXPECT_GE(shrunk * n, Rational(window));
        if ((Rational(window) / shrunk).denominator() == 1) EXPECT_EQ(shrunk * n, Rational(window));
      }
    }
  }
}

TEST(Shrink, Fig5ShrunkWorkload) {
  const auto ts = test::fig5();
  auto snap = parse_snapshot("t = 5\njob l1 release=5 deadline=23.5\njob l2 release=5 deadline=52/3\n", ts);
  const std::size_t h1 = idx(ts, "h1");
  DemandQuery q{h1, 150, snap.jobs, std::nullopt, ShrinkParams{360, 150}};
  EXPECT_EQ(w_l_shrunk(ts, q), 2 * 60 + 3 * 30);
  EXPECT_EQ(dem_delta(ts, q), 2 * 60 + 3 * 30 + 90);
  DemandQuery too_much{h1, 150, snap.jobs, std::nullopt, ShrinkParams{30 * 1000, 150}};
  try {
    w_l_shrunk(ts, too_much);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.kind(), ModelErrorKind::InfeasibleShrink);
  }
}

TEST(Shrink, ZeroDeltaMatchesPlainDemandWhenPeriodsTile) {
  TaskSet ts;
  ts.tasks.push_back({"h", 40, 6, 8, Criticality::HC, 3});
  ts.tasks.push_back({"a", 10, 2, 2, Criticality::LC, 1});
  ts.tasks.push_back({"b", 20, 3, 3, Criticality::LC, 2});
  const auto snap = synchronous_snapshot(ts, 0);
  DemandQuery plain{0, 0, snap.jobs};
  DemandQuery shrunk{0, 0, snap.jobs, std::nullopt, ShrinkParams{0, 0}};
  EXPECT_EQ(w_l_shrunk(ts, shrunk), w_l(ts, plain));
  EXPECT_EQ(dem_delta(ts, shrunk), dem(ts, plain));
}

TEST(Shrink, DemDeltaMonotoneInDelta) {
  const auto ts = test::fig5();
  auto snap = parse_snapshot("t = 5\njob l1 release=5 deadline=23.5\njob l2 release=5 deadline=52/3\n", ts);
  Tick prev = 0;
  for (Tick d = 0; d <= 900; d += 15) {
    DemandQuery q{idx(ts, "h1"), 150, snap.jobs, std::nullopt, ShrinkParams{d, 150}};
    Tick v = 0;
    try {
      v = dem_delta(ts, q);
    } catch (const ModelError&) {
      break;
    }
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Dbf, ReducesToDemAtPivotDeadlineAndGrowsWithZ) {
  const auto ts = test::table2();
  const auto snap = synchronous_snapshot(ts, 0);
  const auto pivot = *lp_l(ts, snap.jobs);
  EXPECT_EQ(ts[pivot].id, "pi5");
  const Tick d = snap.jobs[pivot].abs_deadline;
  EXPECT_EQ(dbf(DbfKind::Normal, ts, pivot, {0, d}, snap.jobs), dem(ts, {pivot, 0, snap.jobs}));
  EXPECT_EQ(dbf(DbfKind::Critical, ts, pivot, {0, d}, snap.jobs), dem_c(ts, {pivot, 0, snap.jobs}));
  Tick prev = 0;
  for (Tick z = 0; z <= 3 * d; z += 37) {
    const Tick v = dbf(DbfKind::Normal, ts, pivot, {0, z}, snap.jobs);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_THROW(dbf(DbfKind::Shrink, ts, pivot, {0, d}, snap.jobs), std::invalid_argument);
}

TEST(Pivots, LowestPriorityByMode) {
  const auto ts = test::table2();
  auto snap = synchronous_snapshot(ts, 0);
  EXPECT_EQ(ts[*lp_l(ts, snap.jobs)].id, "pi5");
  EXPECT_FALSE(lp_h(ts, snap.jobs).has_value());
  snap.jobs[idx(ts, "pi5")].omega = TaskMode::HI;
  snap.jobs[idx(ts, "pi3")].omega = TaskMode::HI;
  EXPECT_EQ(ts[*lp_l(ts, snap.jobs)].id, "pi6");
  EXPECT_EQ(ts[*lp_h(ts, snap.jobs)].id, "pi5");
}

TEST(Stats, FilterSetSizesAreCounted) {
  const auto ts = test::table1();
  const auto snap = synchronous_snapshot(ts, 0);
  DemandStats stats;
  DemandQuery q{idx(ts, "pi2"), 0, snap.jobs, std::nullopt, std::nullopt, &stats};
  dem(ts, q);
  EXPECT_EQ(stats.evaluations, 1);
  EXPECT_EQ(stats.filter_set_size, 0 + 1 + 2);
}

TEST(Oracle, RandomSnapshotsMatchReleaseEnumeration) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int round = 0; round < 400; ++round) {
    const auto ts = test::random_taskset(rng, 4, 30);
    const Tick t = test::uniform(rng, 0, 60);
    const auto snap = test::random_snapshot(rng, ts, t);
    for (std::size_t p = 0; p < ts.size(); ++p) {
      if (!ts[p].is_hc()) continue;
      const Tick end = snap.jobs[p].abs_deadline;
      const Tick longer = end + test::uniform(rng, 0, 40);
      DemandQuery q{p, t, snap.jobs};
      DemandQuery qp = q;
      qp.tail = TailRule::PartialJobs;
      if (snap.jobs[p].omega == TaskMode::LO) {
        ASSERT_EQ(dem(ts, q), oracle::dem(ts, p, t, snap.jobs, end));
        ASSERT_EQ(dem(ts, qp), oracle::dem(ts, p, t, snap.jobs, end, TailRule::PartialJobs));
        ASSERT_GE(dem(ts, qp), dem(ts, q));
        ASSERT_EQ(dem(ts, q), w_h_hi(ts, q) + w_h_lo(ts, q) + w_l(ts, q) +
                                  interference(ts[p], snap.jobs[p], TaskMode::LO, t, end));
        ASSERT_EQ(dbf(DbfKind::Normal, ts, p, {t, longer}, snap.jobs), oracle::dem(ts, p, t, snap.jobs, longer));
        const Tick delta = test::uniform(rng, 0, 20);
        DemandQuery qd{p, t, snap.jobs, std::nullopt, ShrinkParams{delta, t}};
        try {
          ASSERT_EQ(dem_delta(ts, qd), oracle::dem_delta(ts, p, t, snap.jobs, end, delta, t));
        } catch (const ModelError& e) {
          ASSERT_EQ(e.kind(), ModelErrorKind::InfeasibleShrink);
        }
      }
      ASSERT_EQ(dem_c(ts, q), oracle::dem_c(ts, p, t, snap.jobs, end));
      ASSERT_EQ(dem_c(ts, qp), oracle::dem_c(ts, p, t, snap.jobs, end, TailRule::PartialJobs));
      ++checked;
    }
  }
  EXPECT_GT(checked, 400);
}

TEST(Interference, PartialTailCountsWhatFits) {
  const auto ts = test::table2();
  JobState pi1{idx(ts, "pi1"), 170, JobStatus::Ready, 0, TaskMode::LO, 929500, 930050, 80};
  // Released 50 ticks before the window end: psi ignores it, FP cannot.
  EXPECT_EQ(interference(ts[idx(ts, "pi1")], pi1, TaskMode::LO, 929450, 929550), 0);
  EXPECT_EQ(interference(ts[idx(ts, "pi1")], pi1, TaskMode::LO, 929450, 929550, TailRule::PartialJobs), 50);
  EXPECT_EQ(interference(ts[idx(ts, "pi1")], pi1, TaskMode::LO, 929450, 929700, TailRule::PartialJobs), 80);
}
