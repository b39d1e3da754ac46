#include "mcsim/scenario.hpp"

#include <random>
#include <sstream>

#include "mcsim/taskset_io.hpp"

namespace mcsim {

Scenario Scenario::all_lo() {
  Scenario s;
  s.fallback_ = Fallback::Lo;
  return s;
}

Scenario Scenario::all_hi() {
  Scenario s;
  s.fallback_ = Fallback::Hi;
  return s;
}

Scenario Scenario::scripted(std::map<std::pair<std::string, std::int64_t>, Tick> budgets, Fallback fallback) {
  Scenario s;
  s.budgets_ = std::move(budgets);
  s.fallback_ = fallback;
  return s;
}

Scenario Scenario::stochastic(std::uint64_t seed, double overrun_p) {
  if (overrun_p < 0.0 || overrun_p > 1.0) throw ScenarioError("overrun probability must be in [0, 1]");
  Scenario s;
  s.kind_ = Kind::Stochastic;
  s.seed_ = seed;
  s.p_ = overrun_p;
  return s;
}

Scenario Scenario::parse_script(std::string_view text, const TaskSet& ts) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::map<std::pair<std::string, std::int64_t>, Tick> budgets;
  Fallback fallback = Fallback::None;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    const auto where = " (script line " + std::to_string(lineno) + ")";
    if (auto eq = line.find('='); eq != std::string::npos) {
      std::istringstream k(line.substr(0, eq)), v(line.substr(eq + 1));
      std::string key, value;
      k >> key;
      v >> value;
      if (key != "default") throw ScenarioError("unknown key '" + key + "'" + where);
      if (value == "lo") fallback = Fallback::Lo;
      else if (value == "hi") fallback = Fallback::Hi;
      else if (value == "none") fallback = Fallback::None;
      else throw ScenarioError("default must be lo, hi or none" + where);
      continue;
    }
    std::istringstream words(line);
    std::string id, index, amount, extra;
    if (!(words >> id)) continue;
    if (!(words >> index >> amount) || (words >> extra)) throw ScenarioError("expected '<task> <job> <budget>'" + where);
    const auto task = ts.index_of(id);
    if (!task) throw ScenarioError("unknown task '" + id + "'" + where);
    std::int64_t job = 0;
    Tick b = 0;
    try {
      job = std::stoll(index);
      b = to_ticks(parse_quantity(amount), ts.time_scale);
    } catch (const std::exception& e) {
      throw ScenarioError(std::string(e.what()) + where);
    }
    if (job < 1) throw ScenarioError("job index starts at 1" + where);
    const Task& t = ts[*task];
    if (b < t.wcet_lo || b > t.wcet_hi) throw ScenarioError("budget outside [C_lo, C_hi] for " + id + where);
    budgets[{id, job}] = b;
  }
  return scripted(std::move(budgets), fallback);
}

Scenario Scenario::load_script_file(const std::filesystem::path& path, const TaskSet& ts) {
  return parse_script(read_text_file(path), ts);
}

Tick Scenario::budget(const TaskSet& ts, std::size_t task, std::int64_t job_index) const {
  const Task& t = ts[task];
  if (!t.is_hc() || t.wcet_hi == t.wcet_lo) return t.wcet_lo;
  if (kind_ == Kind::Stochastic) {
    // mt19937_64 output is fixed by the standard; the mapping below avoids the
    // implementation-defined std distributions so draws match across platforms.
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(job_index),
                      static_cast<std::uint32_t>(job_index >> 32)};
    std::mt19937_64 gen(seq);
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    if (u >= p_) return t.wcet_lo;
    const auto span = static_cast<std::uint64_t>(t.wcet_hi - t.wcet_lo);
    return t.wcet_lo + 1 + static_cast<Tick>(gen() % span);
  }
  if (auto it = budgets_.find({t.id, job_index}); it != budgets_.end()) return it->second;
  switch (fallback_) {
    case Fallback::Lo: return t.wcet_lo;
    case Fallback::Hi: return t.wcet_hi;
    case Fallback::None: break;
  }
  throw ScenarioError("scenario has no budget for task " + t.id + " job " + std::to_string(job_index));
}

}  // namespace mcsim
