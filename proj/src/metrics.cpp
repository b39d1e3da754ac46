#include "mcsim/metrics.hpp"

#include <algorithm>

#include "json.hpp"

namespace mcsim {

namespace {

template <typename F>
std::int64_t sum_if(const RunMetrics& m, bool hc, F field) {
  std::int64_t total = 0;
  for (const auto& t : m.tasks) {
    if ((t.crit == Criticality::HC) == hc) total += field(t);
  }
  return total;
}

}  // namespace

std::int64_t RunMetrics::hc_misses() const {
  return sum_if(*this, true, [](const TaskMetrics& t) { return t.deadline_misses; });
}
std::int64_t RunMetrics::lc_misses() const {
  return sum_if(*this, false, [](const TaskMetrics& t) { return t.deadline_misses; });
}
std::int64_t RunMetrics::lc_released() const {
  return sum_if(*this, false, [](const TaskMetrics& t) { return t.released; });
}
std::int64_t RunMetrics::lc_discarded() const {
  return sum_if(*this, false, [](const TaskMetrics& t) { return t.discarded; });
}

double RunMetrics::discard_rate() const {
  const auto released = lc_released();
  return released == 0 ? 0.0 : static_cast<double>(lc_discarded()) / static_cast<double>(released);
}

std::vector<std::string> RunMetrics::missing_tasks() const {
  std::vector<std::string> out;
  for (const auto& t : tasks) {
    if (t.deadline_misses > 0) out.push_back(t.id);
  }
  return out;
}

const TaskMetrics* RunMetrics::find(const std::string& id) const {
  auto it = std::find_if(tasks.begin(), tasks.end(), [&](const TaskMetrics& t) { return t.id == id; });
  return it == tasks.end() ? nullptr : &*it;
}

MetricsCollector::MetricsCollector(const TaskSet& ts) {
  m_.time_scale = ts.time_scale;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    index_[ts[i].id] = i;
    TaskMetrics t;
    t.id = ts[i].id;
    t.crit = ts[i].crit;
    m_.tasks.push_back(t);
  }
}

void MetricsCollector::observe(const TraceEvent& e) {
  TaskMetrics* task = nullptr;
  if (!e.task.empty()) {
    if (auto it = index_.find(e.task); it != index_.end()) task = &m_.tasks[it->second];
  }
  switch (e.kind) {
    case EventKind::Release:
      if (task) ++task->released;
      break;
    case EventKind::Complete:
      if (task) {
        ++task->completed;
        task->max_response = std::max(task->max_response, e.value);
      }
      break;
    case EventKind::DeadlineMiss:
      if (task) {
        ++task->deadline_misses;
        task->max_lateness = std::max(task->max_lateness, e.value);
      }
      break;
    case EventKind::Discard:
      if (task) ++task->discarded;
      break;
    case EventKind::TaskModeSwitch:
      ++m_.task_mode_switches;
      break;
    case EventKind::SystemModeSwitch:
      if (e.info.rfind("Critical", 0) == 0) ++m_.critical_switches;
      else ++m_.normal_switches;
      break;
    case EventKind::StretchApplied:
      ++m_.stretch_events;
      break;
    case EventKind::ShrinkApplied:
      if (e.value > 0) ++m_.shrink_plans;
      break;
    case EventKind::NestedPressure:
      ++m_.nested_pressure;
      break;
    default:
      break;
  }
}

std::string metrics_json(const RunMetrics& m, int indent) {
  nlohmann::ordered_json j;
  j["algorithm"] = m.algorithm;
  j["horizon"] = m.horizon;
  j["time_scale"] = m.time_scale;
  auto& g = j["global"];
  g["hc_misses"] = m.hc_misses();
  g["lc_misses"] = m.lc_misses();
  g["lc_released"] = m.lc_released();
  g["lc_discarded"] = m.lc_discarded();
  g["discard_rate"] = m.discard_rate();
  g["task_mode_switches"] = m.task_mode_switches;
  g["critical_switches"] = m.critical_switches;
  g["normal_switches"] = m.normal_switches;
  g["stretch_events"] = m.stretch_events;
  g["shrink_plans"] = m.shrink_plans;
  g["nested_pressure"] = m.nested_pressure;
  g["dem_evaluations"] = m.dem_evaluations;
  g["filter_set_total"] = m.filter_set_total;
  auto& tasks = j["tasks"] = nlohmann::ordered_json::array();
  for (const auto& t : m.tasks) {
    nlohmann::ordered_json o;
    o["id"] = t.id;
    o["crit"] = to_string(t.crit);
    o["released"] = t.released;
    o["completed"] = t.completed;
    o["deadline_misses"] = t.deadline_misses;
    o["discarded"] = t.discarded;
    o["max_response"] = t.max_response;
    o["max_lateness"] = t.max_lateness;
    tasks.push_back(std::move(o));
  }
  return j.dump(indent) + "\n";
}

}  // namespace mcsim
