#pragma once

#include <optional>
#include <span>

#include "mcsim/model.hpp"

namespace mcsim {

struct Interval {
  Tick a = 0;
  Tick b = 0;
  Tick length() const { return b - a; }
};

// Workload of one task over [a, b]: what is left of the current job plus
// one full job per whole period of the interval, and one more when the
// leftover (b - a) % T can hold a full job. Exact integer arithmetic.
Tick psi(Tick wcet, Tick period, Tick lambda_at_a, Interval iv);
Tick psi_hi(const Task& task, Tick lambda_at_a, Interval iv);
Tick psi_lo(const Task& task, Tick lambda_at_a, Interval iv);

struct ShrinkParams {
  Tick delta = 0;  // total shrink to absorb within the pivot's window
  Tick eta = 0;    // absolute instant the shrink window opens
};

// Filter-set bookkeeping, summed over every evaluation that receives it.
// How a later release that only partly fits before the window end counts.
enum class TailRule {
  WholeJobs,    // psi: counted only when its full budget fits
  PartialJobs,  // counted as min(C, time left), what it can preempt under FP
};

struct DemandStats {
  std::int64_t evaluations = 0;
  std::int64_t filter_set_size = 0;
};

// Inputs of one demand evaluation. `jobs` holds the current release of every
// task, indexed by task (jobs[i].task == i).
struct DemandQuery {
  std::size_t pivot = 0;
  Tick t = 0;
  std::span<const JobState> jobs;
  std::optional<Tick> horizon;  // absolute end; defaults to the pivot's period end
  std::optional<ShrinkParams> lc_shrink;
  DemandStats* stats = nullptr;
  TailRule tail = TailRule::WholeJobs;

  Tick end() const { return horizon ? *horizon : jobs[pivot].abs_deadline; }
};

// Demand `task` can place inside [t, end) at criticality level `level`: the
// unfinished part of its current job, then its later releases on its own
// period grid, each counted by psi's rule. A finished or not-yet-released
// current job contributes no remainder.
Tick interference(const Task& task, const JobState& job, TaskMode level, Tick t, Tick end,
                  TailRule tail = TailRule::WholeJobs);

// HC tasks in HI (any priority, pivot excluded), via psi_hi.
Tick w_h_hi(const TaskSet& ts, const DemandQuery& q);
// Higher-priority HC tasks in LO, via psi_lo.
Tick w_h_lo(const TaskSet& ts, const DemandQuery& q);
// Higher-priority LC tasks, via psi_lo.
Tick w_l(const TaskSet& ts, const DemandQuery& q);

// Upper bound on the demand the pivot (HC, in LO) faces until q.end().
Tick dem(const TaskSet& ts, const DemandQuery& q);

// Demand of a trigger task running to C_hi plus higher-priority HC tasks in HI.
Tick dem_c(const TaskSet& ts, const DemandQuery& q);

// mu = T_j * delta / (window + delta): the per-period shrink that spreads
// delta over the shrunk periods fitting in `window`.
Rational shrink_mu(Tick period, Tick delta, Tick window);
// The shrunk period T - mu still holds the task's C.
bool shrink_feasible(const Task& task, const Rational& mu);
// ceil(a / b) for positive rationals.
std::int64_t ceil_div(const Rational& a, const Rational& b);

// LC workload once every higher-priority LC task's period is shrunk by its
// mu: sum of C_j * ceil(window / (T_j - mu_j)). Throws ModelError
// (InfeasibleShrink) when some T_j - mu_j < C_j.
Tick w_l_shrunk(const TaskSet& ts, const DemandQuery& q);

// w_h_hi + w_h_lo + w_l_shrunk + (C_lo - lambda) of the pivot.
Tick dem_delta(const TaskSet& ts, const DemandQuery& q);

enum class DbfKind { Normal, Critical, Shrink };

// Demand over [iv.a, iv.b]: the DEM variant with the pivot's horizon moved
// to iv.b, including the pivot's own later releases.
Tick dbf(DbfKind kind, const TaskSet& ts, std::size_t pivot, Interval iv, std::span<const JobState> jobs,
         std::optional<ShrinkParams> shrink = std::nullopt, DemandStats* stats = nullptr);

// Lowest-priority HC task whose current job is in LO (resp. HI).
std::optional<std::size_t> lp_l(const TaskSet& ts, std::span<const JobState> jobs);
std::optional<std::size_t> lp_h(const TaskSet& ts, std::span<const JobState> jobs);

}  // namespace mcsim
