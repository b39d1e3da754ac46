#include "mcsim/policy.hpp"

#include <tuple>

namespace mcsim {

const char* to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::PriorityOnly: return "Sched";
    case PolicyKind::ModeThenPriority: return "Sched_I";
    case PolicyKind::CritThenModeThenPriority: return "Sched_C";
  }
  return "?";
}

bool ready(const JobState& job, Tick t) {
  return job.release <= t && t < job.abs_deadline && job.status != JobStatus::Done;
}

std::vector<std::size_t> hp(const TaskSet& ts, std::size_t pivot, std::span<const std::size_t> candidates) {
  std::vector<std::size_t> out;
  for (auto c : candidates) {
    if (ts[c].priority < ts[pivot].priority) out.push_back(c);
  }
  return out;
}

std::vector<std::size_t> hp(const TaskSet& ts, std::size_t pivot) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < ts.size(); ++c) {
    if (ts[c].priority < ts[pivot].priority) out.push_back(c);
  }
  return out;
}

namespace {

// Lexicographic key, smaller wins.
std::tuple<int, int, int> rank(PolicyKind policy, const TaskSet& ts, const JobState& job) {
  const Task& task = ts[job.task];
  const int mode = (task.is_hc() && job.omega == TaskMode::HI) ? 0 : 1;
  const int crit = task.is_hc() ? 0 : 1;
  switch (policy) {
    case PolicyKind::PriorityOnly: return {0, 0, task.priority};
    case PolicyKind::ModeThenPriority: return {0, mode, task.priority};
    case PolicyKind::CritThenModeThenPriority: return {crit, mode, task.priority};
  }
  return {0, 0, task.priority};
}

}  // namespace

bool outranks(PolicyKind policy, const TaskSet& ts, const JobState& a, const JobState& b) {
  return rank(policy, ts, a) < rank(policy, ts, b);
}

std::optional<std::size_t> pick(PolicyKind policy, const TaskSet& ts, std::span<const JobState> jobs, Tick t) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!ready(jobs[i], t)) continue;
    if (!best || outranks(policy, ts, jobs[i], jobs[*best])) best = i;
  }
  return best;
}

}  // namespace mcsim
