#pragma once

// Brute-force demand oracle: walks every job release explicitly instead of
// using the closed-form workload expressions.

#include <algorithm>

#include "mcsim/workload.hpp"

namespace mcsim::oracle {

// Unfinished part of the current job plus every later release on the
// task's grid whose full budget fits before `end` (or, for PartialJobs,
// whatever part of it fits).
inline Tick task_demand(const Task& task, const JobState& job, TaskMode level, Tick t, Tick end,
                        TailRule tail = TailRule::WholeJobs) {
  const Tick c = task.wcet(level);
  Tick total = 0;
  Tick r = job.release;
  if (job.release <= t) {
    if (!job.done()) total += c - std::min(job.lambda, c);
    r = job.abs_deadline;
  }
  for (; r < end; r += task.period) {
    if (r + c <= end) {
      total += c;
    } else if (tail == TailRule::PartialJobs) {
      total += end - r;
    }
  }
  return total;
}

inline bool higher(const TaskSet& ts, std::size_t j, std::size_t pivot) {
  return ts[j].priority < ts[pivot].priority;
}

inline Tick dem(const TaskSet& ts, std::size_t pivot, Tick t, std::span<const JobState> jobs, Tick end,
                TailRule tail = TailRule::WholeJobs) {
  Tick total = task_demand(ts[pivot], jobs[pivot], TaskMode::LO, t, end, tail);
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (j == pivot) continue;
    if (ts[j].is_hc() && jobs[j].omega == TaskMode::HI) {
      total += task_demand(ts[j], jobs[j], TaskMode::HI, t, end, tail);
    } else if (higher(ts, j, pivot)) {
      total += task_demand(ts[j], jobs[j], TaskMode::LO, t, end, tail);
    }
  }
  return total;
}

inline Tick dem_c(const TaskSet& ts, std::size_t pivot, Tick t, std::span<const JobState> jobs, Tick end,
                  TailRule tail = TailRule::WholeJobs) {
  Tick total = task_demand(ts[pivot], jobs[pivot], TaskMode::HI, t, end, tail);
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (j != pivot && ts[j].is_hc() && jobs[j].omega == TaskMode::HI && higher(ts, j, pivot)) {
      total += task_demand(ts[j], jobs[j], TaskMode::HI, t, end, tail);
    }
  }
  return total;
}

// Higher-priority LC jobs released from eta on a grid shortened by
// mu = T * delta / (W + delta) for as many periods as it takes to cover
// W = pivot deadline - eta, then on the nominal grid.
inline Tick dem_delta(const TaskSet& ts, std::size_t pivot, Tick t, std::span<const JobState> jobs, Tick end,
                      Tick delta, Tick eta) {
  Tick total = task_demand(ts[pivot], jobs[pivot], TaskMode::LO, t, end);
  const Tick window = jobs[pivot].abs_deadline - eta;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (j == pivot) continue;
    if (ts[j].is_hc()) {
      if (jobs[j].omega == TaskMode::HI) total += task_demand(ts[j], jobs[j], TaskMode::HI, t, end);
      else if (higher(ts, j, pivot)) total += task_demand(ts[j], jobs[j], TaskMode::LO, t, end);
      continue;
    }
    if (!higher(ts, j, pivot)) continue;
    const Rational shrunk = Rational(ts[j].period) - Rational(ts[j].period * delta, window + delta);
    Rational r(eta);
    bool in_window = true;
    while (r < Rational(end)) {
      total += ts[j].wcet_lo;
      if (in_window) {
        r += shrunk;
        if (r >= Rational(eta + window)) in_window = false;
      } else {
        r += ts[j].period;
      }
    }
  }
  return total;
}

}  // namespace mcsim::oracle
