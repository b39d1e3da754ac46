#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mcsim/model.hpp"

namespace mcsim {

enum class EventKind {
  Release,
  Dispatch,
  Preempt,
  Complete,
  DeadlineMiss,
  Discard,
  TaskModeSwitch,
  SystemModeSwitch,
  StretchApplied,
  ShrinkApplied,
  Refresh,
  NestedPressure,
  Idle,
};

const char* to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

// `value` and `info` carry kind-specific details:
//   Release          value = absolute deadline
//   Complete         value = response time
//   DeadlineMiss     value = unfinished work (lateness), info = LC|HC
//   Discard          value = postponement or 0 for a drop, info = reason
//   TaskModeSwitch   value = lambda at the switch, info = LO->HI
//   SystemModeSwitch value = S (offset in the trigger's period), info = <mode>/<pattern>
//   StretchApplied   value = stretch amount, info = new period end
//   ShrinkApplied    value = shrink amount, info = <pattern>[;detail]
//   NestedPressure   value = demand, info = supply
struct TraceEvent {
  Tick t = 0;
  EventKind kind = EventKind::Idle;
  std::string task;  // empty for system-wide events
  std::int64_t job = 0;
  Tick value = 0;
  std::string info;  // never contains ',' or '"'
  bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

// Append-only sink; disabled logs only count. The observer sees every
// event, recorded or not.
class EventLog {
 public:
  using Observer = std::function<void(const TraceEvent&)>;

  explicit EventLog(bool record = true) : record_(record) {}
  void set_observer(Observer observer) { observer_ = std::move(observer); }
  void emit(TraceEvent e) {
    ++count_;
    if (observer_) observer_(e);
    if (record_) events_.push_back(std::move(e));
  }
  const Trace& events() const { return events_; }
  Trace take() { return std::move(events_); }
  std::size_t count() const { return count_; }

 private:
  bool record_;
  Observer observer_;
  std::size_t count_ = 0;
  Trace events_;
};

enum class TraceFormat { Csv, Jsonl, Gantt };
TraceFormat trace_format_from_string(std::string_view s);

// CSV columns: t,kind,task,job,value,info
std::string export_csv(const Trace& trace);
// One JSON object per line with the same fields.
std::string export_jsonl(const Trace& trace);
// task,start,end,mode,pattern: one row per contiguous execution segment.
std::string export_gantt(const Trace& trace);
std::string export_trace(const Trace& trace, TraceFormat format);

Trace parse_csv(std::string_view text);
Trace parse_jsonl(std::string_view text);

struct GanttSegment {
  std::string task;
  Tick start = 0;
  Tick end = 0;
  std::string mode;
  std::string pattern;
  bool operator==(const GanttSegment&) const = default;
};
std::vector<GanttSegment> gantt_segments(const Trace& trace);

}  // namespace mcsim
