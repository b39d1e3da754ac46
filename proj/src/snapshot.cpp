#include "mcsim/snapshot.hpp"

#include <map>
#include <sstream>

#include "mcsim/taskset_io.hpp"

namespace mcsim {

const char* to_string(SystemMode m) { return m == SystemMode::Critical ? "Critical" : "Normal"; }

const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::Regular: return "Regular";
    case Pattern::Stretching: return "Stretching";
    case Pattern::Shrinking: return "Shrinking";
  }
  return "?";
}

Snapshot synchronous_snapshot(const TaskSet& ts, Tick t) {
  Snapshot s;
  s.t = t;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    JobState j;
    j.task = i;
    j.index = t / ts[i].period + 1;
    j.release = (t / ts[i].period) * ts[i].period;
    j.abs_deadline = j.release + ts[i].period;
    j.budget = ts[i].wcet_lo;
    s.jobs.push_back(j);
  }
  return s;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ModelError(ModelErrorKind::Parse, "snapshot parse error (line " + std::to_string(line) + "): " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::map<std::string, std::string> key_values(std::istringstream& words, std::size_t line) {
  std::map<std::string, std::string> kv;
  std::string w;
  while (words >> w) {
    const auto eq = w.find('=');
    if (eq == std::string::npos) fail(line, "expected key=value, got '" + w + "'");
    kv[w.substr(0, eq)] = w.substr(eq + 1);
  }
  return kv;
}

TaskMode parse_mode(const std::string& v, std::size_t line) {
  if (v == "LO") return TaskMode::LO;
  if (v == "HI") return TaskMode::HI;
  fail(line, "omega must be LO or HI");
}

}  // namespace

Snapshot parse_snapshot(std::string_view text, const TaskSet& ts) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;

  struct Pending {
    std::size_t line;
    std::string task;
    std::map<std::string, std::string> kv;
  };
  std::vector<Pending> job_lines;
  std::map<std::string, std::pair<std::size_t, std::string>> settings;
  std::optional<std::pair<std::size_t, std::string>> trigger_line;

  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.rfind("job ", 0) == 0) {
      std::istringstream words(line.substr(4));
      Pending p{lineno, {}, {}};
      if (!(words >> p.task)) fail(lineno, "missing task id");
      p.kv = key_values(words, lineno);
      job_lines.push_back(std::move(p));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "trigger") {
      trigger_line = {lineno, value};
    } else {
      settings[key] = {lineno, value};
    }
  }

  auto ticks = [&](const std::string& v, std::size_t line) {
    try {
      return to_ticks(parse_quantity(v), ts.time_scale);
    } catch (const ModelError&) {
      throw;
    } catch (const std::exception& e) {
      fail(line, e.what());
    }
  };

  Tick t = 0;
  if (auto it = settings.find("t"); it != settings.end()) t = ticks(it->second.second, it->second.first);
  Snapshot snap = synchronous_snapshot(ts, t);

  for (const auto& [key, entry] : settings) {
    const auto& [line, value] = entry;
    if (key == "t") continue;
    if (key == "mode") {
      if (value == "Normal") snap.system.mode = SystemMode::Normal;
      else if (value == "Critical") snap.system.mode = SystemMode::Critical;
      else fail(line, "mode must be Normal or Critical");
    } else if (key == "pattern") {
      if (value == "Regular") snap.system.pattern = Pattern::Regular;
      else if (value == "Stretching") snap.system.pattern = Pattern::Stretching;
      else if (value == "Shrinking") snap.system.pattern = Pattern::Shrinking;
      else fail(line, "unknown pattern");
    } else if (key == "delta") {
      snap.system.delta = ticks(value, line);
    } else if (key == "eta") {
      snap.system.eta = ticks(value, line);
    } else if (key == "shrink") {
      snap.shrink = ShrinkParams{ticks(value, line), 0};
    } else if (key == "all_omega") {
      const TaskMode m = parse_mode(value, line);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i].is_hc()) snap.jobs[i].omega = m;
      }
    } else {
      fail(line, "unknown key " + key);
    }
  }
  if (snap.shrink) snap.shrink->eta = snap.system.eta.value_or(t);

  for (const auto& p : job_lines) {
    const auto idx = ts.index_of(p.task);
    if (!idx) fail(p.line, "unknown task " + p.task);
    JobState& j = snap.jobs[*idx];
    for (const auto& [k, v] : p.kv) {
      if (k == "release") j.release = ticks(v, p.line);
      else if (k == "deadline") j.abs_deadline = ticks(v, p.line);
      else if (k == "lambda") j.lambda = ticks(v, p.line);
      else if (k == "budget") j.budget = ticks(v, p.line);
      else if (k == "index") j.index = std::stoll(v);
      else if (k == "omega") j.omega = parse_mode(v, p.line);
      else if (k == "status") {
        if (v == "Ready") j.status = JobStatus::Ready;
        else if (v == "Running") j.status = JobStatus::Running;
        else if (v == "Done") j.status = JobStatus::Done;
        else fail(p.line, "unknown status " + v);
      } else {
        fail(p.line, "unknown job key " + k);
      }
    }
    if (j.omega == TaskMode::HI && !ts[*idx].is_hc()) fail(p.line, "LC job cannot be in HI");
    if (j.lambda < 0 || j.lambda > ts[*idx].wcet_hi) fail(p.line, "lambda out of range");
  }

  if (trigger_line) {
    std::istringstream words(trigger_line->second);
    std::string id;
    words >> id;
    const auto idx = ts.index_of(id);
    if (!idx) fail(trigger_line->first, "unknown trigger task " + id);
    auto kv = key_values(words, trigger_line->first);
    Trigger trig;
    trig.task = *idx;
    const JobState& job = snap.jobs[*idx];
    trig.offset = kv.count("offset") ? ticks(kv["offset"], trigger_line->first) : t - job.release;
    trig.switched_at = job.release + trig.offset;
    trig.expires_at = job.abs_deadline;
    snap.system.trigger = trig;
  }
  if ((snap.system.mode == SystemMode::Critical) != snap.system.trigger.has_value()) {
    fail(lineno, "a trigger is required exactly when mode = Critical");
  }
  return snap;
}

Snapshot load_snapshot_file(const std::filesystem::path& path, const TaskSet& ts) {
  return parse_snapshot(read_text_file(path), ts);
}

}  // namespace mcsim
