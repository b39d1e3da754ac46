#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "mcsim/model.hpp"

namespace mcsim {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source of per-job execution demands. HC budgets lie in [C_lo, C_hi]; LC
// budgets are always C_lo.
class Scenario {
 public:
  enum class Kind { Scripted, Stochastic };
  enum class Fallback { None, Lo, Hi };

  // Every job runs C_lo (resp. C_hi).
  static Scenario all_lo();
  static Scenario all_hi();
  // Budgets keyed by (task id, 1-based job index), in ticks. Jobs without an
  // entry use `fallback`; Fallback::None makes them an error.
  static Scenario scripted(std::map<std::pair<std::string, std::int64_t>, Tick> budgets, Fallback fallback);
  // Each HC job overruns with probability p; an overrun budget is uniform
  // over (C_lo, C_hi]. Draws depend only on (seed, task index, job index).
  static Scenario stochastic(std::uint64_t seed, double overrun_p);

  // Script text, budgets in model units:
  //   default = lo        # lo | hi | none
  //   pi1 2 7             # task id, job index, budget
  static Scenario parse_script(std::string_view text, const TaskSet& ts);
  static Scenario load_script_file(const std::filesystem::path& path, const TaskSet& ts);

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  double overrun_p() const { return p_; }

  // Throws ScenarioError naming (task, job index) for a missing script entry.
  Tick budget(const TaskSet& ts, std::size_t task, std::int64_t job_index) const;

 private:
  Kind kind_ = Kind::Scripted;
  std::map<std::pair<std::string, std::int64_t>, Tick> budgets_;
  Fallback fallback_ = Fallback::Lo;
  std::uint64_t seed_ = 0;
  double p_ = 0.0;
};

}  // namespace mcsim
