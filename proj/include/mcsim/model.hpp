#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace mcsim {

// All schedule quantities are integer ticks. A taskset's time_scale says how
// many ticks make one model-time unit.
using Tick = std::int64_t;
using Rational = boost::rational<std::int64_t>;

enum class Criticality { LC, HC };
enum class TaskMode { LO, HI };
enum class JobStatus { Ready, Running, Done };

struct Task {
  std::string id;
  Tick period = 0;   // implicit deadline
  Tick wcet_lo = 0;
  Tick wcet_hi = 0;
  Criticality crit = Criticality::LC;
  int priority = 0;  // smaller number = higher priority

  bool is_hc() const { return crit == Criticality::HC; }
  Tick wcet(TaskMode mode) const { return mode == TaskMode::HI ? wcet_hi : wcet_lo; }
  bool operator==(const Task&) const = default;
};

struct TaskSet {
  std::vector<Task> tasks;
  std::int64_t time_scale = 1;

  std::size_t size() const { return tasks.size(); }
  const Task& operator[](std::size_t i) const { return tasks[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;
  // Least common multiple of the nominal periods.
  Tick hyperperiod() const;
  bool operator==(const TaskSet&) const = default;
};

// Runtime state of the current release of one task.
struct JobState {
  std::size_t task = 0;
  std::int64_t index = 1;  // 1-based release counter
  JobStatus status = JobStatus::Ready;
  Tick lambda = 0;  // budget consumed by this release
  TaskMode omega = TaskMode::LO;
  Tick release = 0;
  Tick abs_deadline = 0;  // end of the current (possibly stretched/shrunk) period
  Tick budget = 0;        // actual execution demand of this release
  bool discarded = false;

  bool done() const { return status == JobStatus::Done; }
  bool operator==(const JobState&) const = default;
};

enum class ModelErrorKind {
  Parse,
  EmptyTaskset,
  BadTimeScale,
  DuplicateId,
  DuplicatePriority,
  NonPositivePeriod,
  NonPositiveWcet,
  WcetOrder,
  LcWcetMismatch,
  WcetExceedsPeriod,
  NoHcTask,
  NonIntegralTicks,
  InfeasibleShrink,
  ModeMismatch,
};

const char* to_string(ModelErrorKind kind);

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ModelErrorKind kind() const { return kind_; }

 private:
  ModelErrorKind kind_;
};

// Throws ModelError on the first violated invariant.
void validate(const TaskSet& ts);

// Utilization of one task. shrink > 0 evaluates C / (T - shrink), which must
// still fit the job (C <= T - shrink).
Rational utilization(const Task& task, TaskMode mode, Tick shrink = 0);

const char* to_string(Criticality c);
const char* to_string(TaskMode m);
const char* to_string(JobStatus s);

}  // namespace mcsim
