#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mcsim/model.hpp"
#include "mcsim/policy.hpp"
#include "mcsim/system_state.hpp"
#include "mcsim/trace.hpp"
#include "mcsim/workload.hpp"

namespace mcsim {

// Which HC jobs the Normal -> Critical rule is evaluated for.
enum class SwitchScan {
  AllPending,      // every unfinished HC job in LO; the lowest-priority failing one triggers
  LowestPriority,  // only the lowest-priority unfinished HC job in LO
};

struct ControllerOptions {
  SwitchScan scan = SwitchScan::AllPending;
  bool report_nested_pressure = true;
  TailRule tail = TailRule::PartialJobs;  // demand bound used by the runtime checks
};

// Per-LC-task part of a shrink plan: `steps[k]` ticks come off the task's
// k-th upcoming period. The steps sum to the plan amount.
struct LcShrink {
  std::size_t task = 0;
  Rational mu;
  std::int64_t periods = 0;  // ceil(window / (T - mu))
  std::vector<Tick> steps;
};

struct ShrinkPlan {
  std::size_t pivot = 0;
  Tick eta = 0;
  Tick window = 0;
  Tick amount = 0;  // the d absorbed by this plan, 0 < amount <= delta
  std::int64_t probes = 0;
  std::vector<LcShrink> tasks;
};

// Splits `amount` over `periods` periods so that the cumulative shrink after
// k periods is min(amount, floor(k * mu)). Trailing zero steps are dropped.
std::vector<Tick> shrink_steps(const Rational& mu, std::int64_t periods, Tick amount);

// Largest d in [1, delta] for which every LC task's mu fits and the
// shrunk-workload demand of lp_l stays within its window, found by binary
// search. nullopt when no HC task is in LO or no d > 0 is feasible.
std::optional<ShrinkPlan> plan_shrink(const TaskSet& ts, std::span<const JobState> jobs, Tick t, Tick delta,
                                      DemandStats* stats = nullptr, TailRule tail = TailRule::WholeJobs);

struct ExpiryOutcome {
  bool missed = false;
  Tick lateness = 0;
  bool switched_back = false;
};

// Mode state machine of the elastic multimode scheduler: job-level LO/HI
// switches, Normal/Critical switches with trigger bookkeeping, LC stretching
// and the compensating shrink plans.
//
// Stretch debt is tracked twice. `delta` is debt not yet assigned to a shrink
// plan; per LC task, `lag` is how far its release grid trails the nominal one.
// Between the two sits the planned-but-unrealized shrink of each task, so
// lag(j) == delta + pending(j) at every instant.
class ModeController {
 public:
  explicit ModeController(const TaskSet& ts, ControllerOptions options = {});

  const SystemState& state() const { return state_; }
  // Resumes from a snapshot: every LC task is assumed to trail by state.delta.
  void restore(const SystemState& state, Tick now);

  PolicyKind active_policy(std::span<const JobState> jobs) const;

  // LO -> HI once a running HC job has consumed C_lo and still has work.
  bool on_budget_tick(JobState& job, Tick t, EventLog& log);

  // The period of `job` ends at t. Records a miss if the job is unfinished,
  // books a completed shrink step, and switches back to Normal when `job`
  // is the trigger's.
  ExpiryOutcome on_period_expiry(JobState& job, Tick t, EventLog& log);

  // Starts the next release of job.task at t: Refresh (lambda 0, LO, Ready)
  // and a period shortened by the next planned shrink step, if any.
  void release(JobState& job, Tick t, Tick budget, EventLog& log);

  // Normal -> Critical when some HC job in LO has DEM >= time left in its
  // period. Stretches every LC period and books the debt.
  std::optional<Trigger> check_system_switch(std::span<JobState> jobs, Tick t, EventLog& log);

  // While Critical: reports other HC jobs in LO whose demand check fails.
  void check_nested_pressure(std::span<const JobState> jobs, Tick t, EventLog& log);

  // Extends every LC job's period end (and so its next release) by amount.
  // A job whose total postponement exceeds its slack T - C is discarded.
  void apply_stretch(std::span<JobState> jobs, Tick amount, Tick t, EventLog& log);

  // Critical -> Normal at the trigger's period end. Throws std::logic_error
  // in Normal mode.
  void switch_back(Tick t, EventLog& log, std::int64_t job_index = 0);

  // One shrink plan per Normal window: when eligible, plans the largest
  // feasible d and schedules its steps on the LC tasks.
  std::optional<ShrinkPlan> try_shrink(std::span<JobState> jobs, Tick t, EventLog& log);
  bool shrink_eligible(Tick t) const;

  Tick lag(std::size_t task) const { return lag_[task]; }
  Tick pending(std::size_t task) const;
  Tick total_stretched() const { return total_stretched_; }
  Tick total_planned() const { return total_planned_; }
  const DemandStats& stats() const { return stats_; }

 private:
  bool demand_fails(std::span<const JobState> jobs, std::size_t pivot, Tick t, Tick* demand = nullptr);
  void finish_pattern_if_done(Tick t, EventLog& log);

  const TaskSet* ts_;
  ControllerOptions options_;
  SystemState state_;
  std::vector<Tick> lag_;
  std::vector<std::deque<Tick>> planned_;  // upcoming steps per task
  std::vector<Tick> active_step_;          // step applied to the current period
  std::vector<Tick> stretched_;            // postponement of the current LC period
  std::vector<bool> pressure_reported_;
  Tick next_shrink_attempt_ = 0;
  Tick total_stretched_ = 0;
  Tick total_planned_ = 0;
  DemandStats stats_;
};

}  // namespace mcsim
