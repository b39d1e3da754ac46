#pragma once

#include <random>

#include "mcsim/snapshot.hpp"

namespace mcsim::test {

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Valid taskset with 1..max_tasks tasks, periods in [min_period, max_period]
// and at least one HC task.
inline TaskSet random_taskset(std::mt19937_64& rng, int max_tasks, Tick max_period, Tick min_period = 2) {
  TaskSet ts;
  const int n = static_cast<int>(uniform(rng, 1, max_tasks));
  std::vector<int> prio(n);
  for (int i = 0; i < n; ++i) prio[i] = i + 1;
  std::shuffle(prio.begin(), prio.end(), rng);
  for (int i = 0; i < n; ++i) {
    Task t;
    t.id = "t" + std::to_string(i);
    t.period = uniform(rng, min_period, max_period);
    t.crit = (i == 0 || rng() % 2 == 0) ? Criticality::HC : Criticality::LC;
    t.wcet_lo = uniform(rng, 1, std::max<Tick>(1, t.period / 3));
    t.wcet_hi = t.is_hc() ? uniform(rng, t.wcet_lo, std::max(t.wcet_lo, t.period / 2)) : t.wcet_lo;
    t.priority = prio[i];
    ts.tasks.push_back(t);
  }
  return ts;
}

// Consistent snapshot at t: each task's current job has a random phase,
// progress, mode and status; some LC jobs are deferred into the future.
inline Snapshot random_snapshot(std::mt19937_64& rng, const TaskSet& ts, Tick t) {
  Snapshot s = synchronous_snapshot(ts, t);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Task& task = ts[i];
    JobState& j = s.jobs[i];
    if (!task.is_hc() && rng() % 5 == 0) {
      j.release = t + uniform(rng, 1, task.period);
      j.abs_deadline = j.release + task.period;
      continue;
    }
    j.release = t - uniform(rng, 0, task.period - 1);
    j.abs_deadline = j.release + task.period + (task.is_hc() ? 0 : uniform(rng, 0, task.period));
    if (task.is_hc() && rng() % 3 == 0) j.omega = TaskMode::HI;
    j.budget = j.omega == TaskMode::HI ? task.wcet_hi : task.wcet_lo;
    j.lambda = uniform(rng, 0, j.budget);
    if (j.omega == TaskMode::HI) j.lambda = std::max(j.lambda, task.wcet_lo);
    j.status = j.lambda == j.budget ? JobStatus::Done : JobStatus::Ready;
  }
  return s;
}

}  // namespace mcsim::test
