#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mcsim/model.hpp"
#include "mcsim/trace.hpp"

namespace mcsim {

struct TaskMetrics {
  std::string id;
  Criticality crit = Criticality::LC;
  std::int64_t released = 0;
  std::int64_t completed = 0;
  std::int64_t deadline_misses = 0;
  std::int64_t discarded = 0;
  Tick max_response = 0;
  Tick max_lateness = 0;
};

struct RunMetrics {
  std::string algorithm;
  Tick horizon = 0;
  std::int64_t time_scale = 1;
  std::vector<TaskMetrics> tasks;

  std::int64_t task_mode_switches = 0;
  std::int64_t critical_switches = 0;
  std::int64_t normal_switches = 0;
  std::int64_t stretch_events = 0;
  std::int64_t shrink_plans = 0;
  std::int64_t nested_pressure = 0;
  std::int64_t dem_evaluations = 0;
  std::int64_t filter_set_total = 0;

  std::int64_t hc_misses() const;
  std::int64_t lc_misses() const;
  std::int64_t lc_released() const;
  std::int64_t lc_discarded() const;
  // LC jobs discarded / LC jobs released; 0 when nothing was released.
  double discard_rate() const;
  // Ids of tasks with at least one deadline miss, in taskset order.
  std::vector<std::string> missing_tasks() const;
  const TaskMetrics* find(const std::string& id) const;
};

// Folds trace events into RunMetrics as they are emitted.
class MetricsCollector {
 public:
  explicit MetricsCollector(const TaskSet& ts);
  void observe(const TraceEvent& e);
  RunMetrics& metrics() { return m_; }
  const RunMetrics& metrics() const { return m_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  RunMetrics m_;
};

// {"algorithm", "horizon", "time_scale", "global": {...}, "tasks": [...]}
std::string metrics_json(const RunMetrics& m, int indent = 2);

}  // namespace mcsim
