#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mcsim/controller.hpp"
#include "mcsim/metrics.hpp"
#include "mcsim/scenario.hpp"
#include "mcsim/snapshot.hpp"
#include "mcsim/trace.hpp"

namespace mcsim {

enum class Algorithm {
  FPClassic,        // fixed priority, no mode handling
  TaskLevelOnly,    // per-job LO/HI switches, HI jobs first
  SystemLevelDrop,  // any overrun drops LC work until that task's period ends
  Multimode,        // elastic multimode scheduling
};

const char* to_string(Algorithm a);
// fp | tasklevel | sld | multimode
const char* cli_name(Algorithm a);
Algorithm algorithm_from_string(std::string_view s);
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::FPClassic, Algorithm::TaskLevelOnly,
                                               Algorithm::SystemLevelDrop, Algorithm::Multimode};

// Raised when a runtime invariant check fails.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SimOptions {
  Algorithm algorithm = Algorithm::Multimode;
  Tick horizon = 0;  // events at t < horizon are simulated; 0 means one hyperperiod
  ControllerOptions controller;
  bool record_trace = true;
  bool check_invariants = false;
  // Called at each Critical -> Normal instant once that instant's expiries,
  // releases and overruns are processed, before the next switch check.
  std::function<void(const Snapshot&)> on_switch_back;
};

struct SimResult {
  Trace trace;
  RunMetrics metrics;
};

// Discrete-event uniprocessor simulator. Every instant is processed in
// phases: period expiries, releases, overrun detection, system switch
// check, shrink check, dispatch.
class Engine {
 public:
  Engine(const TaskSet& ts, Scenario scenario, SimOptions options);
  // Resumes from a snapshot; snap.t is the first processed instant.
  Engine(const TaskSet& ts, Scenario scenario, SimOptions options, const Snapshot& start);
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Processes the next event instant. Returns false once the horizon is reached.
  bool step();
  SimResult run();

  Tick now() const { return now_; }
  Tick horizon() const { return options_.horizon; }
  std::span<const JobState> jobs() const { return jobs_; }
  std::optional<std::size_t> running() const { return running_; }
  PolicyKind policy() const;
  SystemState system() const;
  Snapshot snapshot() const;
  const ModeController* controller() const { return controller_ ? &*controller_ : nullptr; }
  const EventLog& log() const { return log_; }
  const RunMetrics& metrics() const { return collector_.metrics(); }

 private:
  void init(std::vector<JobState> jobs, Tick start);
  Tick next_event_time() const;
  void advance(Tick t);
  void process(Tick t);
  void expire(Tick t);
  void release(Tick t);
  void detect_overruns(Tick t);
  void sld_enter(std::size_t task, Tick t);
  void drop(JobState& job, Tick t);
  void dispatch(Tick t);
  void check_invariants(Tick t) const;
  void finish();

  const TaskSet* ts_;
  Scenario scenario_;
  SimOptions options_;
  std::vector<JobState> jobs_;
  std::optional<std::size_t> running_;
  Tick now_ = 0;
  bool started_ = false;
  bool finished_ = false;
  bool idle_ = false;
  bool switched_back_ = false;
  std::optional<ModeController> controller_;
  SystemState sld_;
  Tick sld_until_ = 0;
  EventLog log_;
  MetricsCollector collector_;
};

SimResult simulate(const TaskSet& ts, const Scenario& scenario, SimOptions options);

}  // namespace mcsim
