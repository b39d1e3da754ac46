#include "mcsim/trace.hpp"

#include <array>
#include <optional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mcsim {

namespace {

constexpr std::array<std::pair<EventKind, const char*>, 13> kKinds{{
    {EventKind::Release, "Release"},
    {EventKind::Dispatch, "Dispatch"},
    {EventKind::Preempt, "Preempt"},
    {EventKind::Complete, "Complete"},
    {EventKind::DeadlineMiss, "DeadlineMiss"},
    {EventKind::Discard, "Discard"},
    {EventKind::TaskModeSwitch, "TaskModeSwitch"},
    {EventKind::SystemModeSwitch, "SystemModeSwitch"},
    {EventKind::StretchApplied, "StretchApplied"},
    {EventKind::ShrinkApplied, "ShrinkApplied"},
    {EventKind::Refresh, "Refresh"},
    {EventKind::NestedPressure, "NestedPressure"},
    {EventKind::Idle, "Idle"},
}};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

const char* to_string(EventKind k) {
  for (const auto& [kind, name] : kKinds) {
    if (kind == k) return name;
  }
  return "?";
}

EventKind event_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kKinds) {
    if (s == name) return kind;
  }
  throw std::invalid_argument("unknown event kind: " + std::string(s));
}

TraceFormat trace_format_from_string(std::string_view s) {
  if (s == "csv") return TraceFormat::Csv;
  if (s == "jsonl") return TraceFormat::Jsonl;
  if (s == "gantt" || s == "gantt-rows") return TraceFormat::Gantt;
  throw std::invalid_argument("unknown trace format: " + std::string(s));
}

std::string export_csv(const Trace& trace) {
  std::ostringstream os;
  os << "t,kind,task,job,value,info\n";
  for (const auto& e : trace) {
    os << e.t << ',' << to_string(e.kind) << ',' << e.task << ',' << e.job << ',' << e.value << ',' << e.info << '\n';
  }
  return os.str();
}

std::string export_jsonl(const Trace& trace) {
  std::ostringstream os;
  for (const auto& e : trace) {
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["kind"] = to_string(e.kind);
    j["task"] = e.task;
    j["job"] = e.job;
    j["value"] = e.value;
    j["info"] = e.info;
    os << j.dump() << '\n';
  }
  return os.str();
}

Trace parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Trace out;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      if (line != "t,kind,task,job,value,info") throw std::invalid_argument("bad trace csv header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 6) throw std::invalid_argument("bad trace csv row: " + line);
    out.push_back({std::stoll(f[0]), event_kind_from_string(f[1]), f[2], std::stoll(f[3]), std::stoll(f[4]), f[5]});
  }
  return out;
}

Trace parse_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Trace out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    out.push_back({j.at("t").get<Tick>(), event_kind_from_string(j.at("kind").get<std::string>()),
                   j.at("task").get<std::string>(), j.at("job").get<std::int64_t>(), j.at("value").get<Tick>(),
                   j.at("info").get<std::string>()});
  }
  return out;
}

std::vector<GanttSegment> gantt_segments(const Trace& trace) {
  std::vector<GanttSegment> out;
  std::string mode = "Normal";
  std::string pattern = "Regular";
  std::optional<GanttSegment> open;
  auto close = [&](Tick t) {
    if (open) {
      open->end = t;
      if (open->end > open->start) out.push_back(*open);
      open.reset();
    }
  };
  auto reopen = [&](Tick t) {
    if (!open || (open->mode == mode && open->pattern == pattern)) return;
    const std::string task = open->task;
    close(t);
    open = GanttSegment{task, t, t, mode, pattern};
  };
  for (const auto& e : trace) {
    switch (e.kind) {
      case EventKind::SystemModeSwitch: {
        auto parts = split(e.info, '/');
        mode = parts[0];
        if (parts.size() > 1) pattern = parts[1];
        reopen(e.t);
        break;
      }
      case EventKind::ShrinkApplied:
        pattern = split(e.info, ';')[0];
        reopen(e.t);
        break;
      case EventKind::Dispatch:
        close(e.t);
        open = GanttSegment{e.task, e.t, e.t, mode, pattern};
        break;
      case EventKind::Preempt:
      case EventKind::Complete:
      case EventKind::Idle:
        close(e.t);
        break;
      case EventKind::DeadlineMiss:
        if (open && open->task == e.task) close(e.t);
        break;
      default:
        break;
    }
  }
  if (open && !trace.empty()) close(trace.back().t);
  return out;
}

std::string export_gantt(const Trace& trace) {
  std::ostringstream os;
  os << "task,start,end,mode,pattern\n";
  for (const auto& s : gantt_segments(trace)) {
    os << s.task << ',' << s.start << ',' << s.end << ',' << s.mode << ',' << s.pattern << '\n';
  }
  return os.str();
}

std::string export_trace(const Trace& trace, TraceFormat format) {
  switch (format) {
    case TraceFormat::Csv: return export_csv(trace);
    case TraceFormat::Jsonl: return export_jsonl(trace);
    case TraceFormat::Gantt: return export_gantt(trace);
  }
  return {};
}

}  // namespace mcsim
