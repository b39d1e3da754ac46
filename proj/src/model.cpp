#include "mcsim/model.hpp"

#include <numeric>
#include <set>

namespace mcsim {

std::optional<std::size_t> TaskSet::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id == id) return i;
  }
  return std::nullopt;
}

Tick TaskSet::hyperperiod() const {
  Tick h = 1;
  for (const auto& t : tasks) h = std::lcm(h, t.period);
  return h;
}

const char* to_string(ModelErrorKind kind) {
  switch (kind) {
    case ModelErrorKind::Parse: return "parse error";
    case ModelErrorKind::EmptyTaskset: return "empty taskset";
    case ModelErrorKind::BadTimeScale: return "bad time_scale";
    case ModelErrorKind::DuplicateId: return "duplicate task id";
    case ModelErrorKind::DuplicatePriority: return "duplicate priority";
    case ModelErrorKind::NonPositivePeriod: return "non-positive period";
    case ModelErrorKind::NonPositiveWcet: return "non-positive wcet";
    case ModelErrorKind::WcetOrder: return "wcet_hi < wcet_lo";
    case ModelErrorKind::LcWcetMismatch: return "LC task with wcet_hi != wcet_lo";
    case ModelErrorKind::WcetExceedsPeriod: return "wcet_hi exceeds period";
    case ModelErrorKind::NoHcTask: return "no HC task";
    case ModelErrorKind::NonIntegralTicks: return "value is not an integral number of ticks";
    case ModelErrorKind::InfeasibleShrink: return "infeasible shrink";
    case ModelErrorKind::ModeMismatch: return "mode not applicable to task";
  }
  return "unknown";
}

const char* to_string(Criticality c) { return c == Criticality::HC ? "HC" : "LC"; }
const char* to_string(TaskMode m) { return m == TaskMode::HI ? "HI" : "LO"; }
const char* to_string(JobStatus s) {
  switch (s) {
    case JobStatus::Ready: return "Ready";
    case JobStatus::Running: return "Running";
    case JobStatus::Done: return "Done";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(ModelErrorKind kind, const std::string& detail) {
  throw ModelError(kind, std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail));
}

}  // namespace

void validate(const TaskSet& ts) {
  if (ts.tasks.empty()) fail(ModelErrorKind::EmptyTaskset, "");
  if (ts.time_scale <= 0) fail(ModelErrorKind::BadTimeScale, std::to_string(ts.time_scale));

  std::set<std::string> ids;
  std::set<int> prios;
  bool any_hc = false;
  for (const auto& t : ts.tasks) {
    if (!ids.insert(t.id).second) fail(ModelErrorKind::DuplicateId, t.id);
    if (!prios.insert(t.priority).second) {
      fail(ModelErrorKind::DuplicatePriority, t.id + " priority " + std::to_string(t.priority));
    }
    if (t.period <= 0) fail(ModelErrorKind::NonPositivePeriod, t.id);
    if (t.wcet_lo <= 0) fail(ModelErrorKind::NonPositiveWcet, t.id);
    if (t.is_hc()) {
      if (t.wcet_hi < t.wcet_lo) fail(ModelErrorKind::WcetOrder, t.id);
      any_hc = true;
    } else if (t.wcet_hi != t.wcet_lo) {
      fail(ModelErrorKind::LcWcetMismatch, t.id);
    }
    if (t.wcet_hi > t.period) fail(ModelErrorKind::WcetExceedsPeriod, t.id);
  }
  if (!any_hc) fail(ModelErrorKind::NoHcTask, "");
}

Rational utilization(const Task& task, TaskMode mode, Tick shrink) {
  if (mode == TaskMode::HI && !task.is_hc()) fail(ModelErrorKind::ModeMismatch, task.id);
  const Tick c = task.wcet(mode);
  if (shrink < 0 || c > task.period - shrink) {
    fail(ModelErrorKind::InfeasibleShrink,
         task.id + " shrink " + std::to_string(shrink) + " leaves less than " + std::to_string(c));
  }
  return Rational(c, task.period - shrink);
}

}  // namespace mcsim
