#include "mcsim/engine.hpp"

#include <algorithm>
#include <string>

namespace mcsim {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::FPClassic: return "FPClassic";
    case Algorithm::TaskLevelOnly: return "TaskLevelOnly";
    case Algorithm::SystemLevelDrop: return "SystemLevelDrop";
    case Algorithm::Multimode: return "Multimode";
  }
  return "?";
}

const char* cli_name(Algorithm a) {
  switch (a) {
    case Algorithm::FPClassic: return "fp";
    case Algorithm::TaskLevelOnly: return "tasklevel";
    case Algorithm::SystemLevelDrop: return "sld";
    case Algorithm::Multimode: return "multimode";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view s) {
  for (auto a : kAllAlgorithms) {
    if (s == cli_name(a) || s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + std::string(s));
}

Engine::Engine(const TaskSet& ts, Scenario scenario, SimOptions options)
    : ts_(&ts), scenario_(std::move(scenario)), options_(options), log_(options.record_trace), collector_(ts) {
  std::vector<JobState> jobs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    // Placeholder release 0 that expires at t = 0, so the first instant
    // releases job 1 of every task.
    jobs[i].task = i;
    jobs[i].index = 0;
    jobs[i].status = JobStatus::Done;
  }
  init(std::move(jobs), 0);
}

Engine::Engine(const TaskSet& ts, Scenario scenario, SimOptions options, const Snapshot& start)
    : ts_(&ts), scenario_(std::move(scenario)), options_(options), log_(options.record_trace), collector_(ts) {
  if (start.jobs.size() != ts.size()) throw std::invalid_argument("snapshot must hold one job per task");
  if (options_.algorithm == Algorithm::Multimode) {
    controller_.emplace(ts, options_.controller);
    controller_->restore(start.system, start.t);
  } else if (start.system.mode != SystemMode::Normal) {
    throw std::invalid_argument("only Multimode can resume from a Critical snapshot");
  }
  std::vector<JobState> jobs = start.jobs;
  for (auto& j : jobs) {
    if (j.status == JobStatus::Running) j.status = JobStatus::Ready;
  }
  init(std::move(jobs), start.t);
}

void Engine::init(std::vector<JobState> jobs, Tick start) {
  jobs_ = std::move(jobs);
  now_ = start;
  if (options_.horizon <= 0) options_.horizon = start + ts_->hyperperiod();
  if (options_.algorithm == Algorithm::Multimode && !controller_) controller_.emplace(*ts_, options_.controller);
  log_.set_observer([this](const TraceEvent& e) { collector_.observe(e); });
  collector_.metrics().algorithm = to_string(options_.algorithm);
  collector_.metrics().horizon = options_.horizon;
}

PolicyKind Engine::policy() const {
  switch (options_.algorithm) {
    case Algorithm::FPClassic:
    case Algorithm::SystemLevelDrop:
      return PolicyKind::PriorityOnly;
    case Algorithm::TaskLevelOnly:
      for (const auto& j : jobs_) {
        if ((*ts_)[j.task].is_hc() && j.omega == TaskMode::HI) return PolicyKind::ModeThenPriority;
      }
      return PolicyKind::PriorityOnly;
    case Algorithm::Multimode:
      return controller_->active_policy(jobs_);
  }
  return PolicyKind::PriorityOnly;
}

SystemState Engine::system() const {
  if (controller_) return controller_->state();
  if (options_.algorithm == Algorithm::SystemLevelDrop) return sld_;
  return {};
}

Snapshot Engine::snapshot() const {
  Snapshot snap;
  snap.t = now_;
  snap.jobs = jobs_;
  snap.system = system();
  return snap;
}

bool Engine::step() {
  if (finished_) return false;
  Tick t = now_;
  if (started_) t = next_event_time();
  started_ = true;
  if (t >= options_.horizon) {
    finish();
    return false;
  }
  advance(t);
  process(t);
  return true;
}

SimResult Engine::run() {
  while (step()) {
  }
  return {log_.take(), collector_.metrics()};
}

Tick Engine::next_event_time() const {
  Tick next = options_.horizon;
  auto consider = [&](Tick x) {
    if (x > now_) next = std::min(next, x);
  };
  for (const auto& j : jobs_) {
    consider(j.abs_deadline);
    consider(j.release);
  }
  if (running_) {
    const JobState& j = jobs_[*running_];
    const Task& task = (*ts_)[j.task];
    consider(now_ + j.budget - j.lambda);
    if (task.is_hc() && j.omega == TaskMode::LO && j.lambda < task.wcet_lo && j.budget > task.wcet_lo) {
      consider(now_ + task.wcet_lo - j.lambda);
    }
  }
  if (options_.algorithm == Algorithm::SystemLevelDrop && sld_.mode == SystemMode::Critical) consider(sld_until_);
  return next;
}

void Engine::advance(Tick t) {
  if (running_ && t > now_) {
    JobState& j = jobs_[*running_];
    j.lambda += t - now_;
    if (j.lambda == j.budget) {
      j.status = JobStatus::Done;
      log_.emit({t, EventKind::Complete, (*ts_)[j.task].id, j.index, t - j.release, ""});
      running_.reset();
    }
  }
  now_ = t;
}

void Engine::process(Tick t) {
  expire(t);
  release(t);
  detect_overruns(t);
  if (switched_back_) {
    switched_back_ = false;
    if (options_.on_switch_back) options_.on_switch_back(snapshot());
  }
  if (controller_) {
    if (controller_->state().mode == SystemMode::Normal) {
      controller_->check_system_switch(jobs_, t, log_);
    } else {
      controller_->check_nested_pressure(jobs_, t, log_);
    }
    controller_->try_shrink(jobs_, t, log_);
  }
  dispatch(t);
  if (options_.check_invariants) check_invariants(t);
}

void Engine::expire(Tick t) {
  for (auto& j : jobs_) {
    if (j.abs_deadline != t || j.release > t) continue;
    const Task& task = (*ts_)[j.task];
    const bool was_pending = !j.done();
    if (controller_) {
      const auto before = controller_->state().trigger;
      const auto out = controller_->on_period_expiry(j, t, log_);
      switched_back_ = switched_back_ || out.switched_back;
      if (out.switched_back && options_.check_invariants) {
        const Tick expected = (*ts_)[before->task].period - before->offset;
        if (t - before->switched_at != expected) {
          throw InvariantViolation("Critical lasted " + std::to_string(t - before->switched_at) + " ticks, expected " +
                                   std::to_string(expected));
        }
      }
    } else if (was_pending) {
      log_.emit({t, EventKind::DeadlineMiss, task.id, j.index, j.budget - j.lambda, to_string(task.crit)});
      j.status = JobStatus::Done;
    }
    if (was_pending && running_ == j.task) running_.reset();
  }
  if (options_.algorithm == Algorithm::SystemLevelDrop && sld_.mode == SystemMode::Critical && t >= sld_until_) {
    sld_.mode = SystemMode::Normal;
    log_.emit({t, EventKind::SystemModeSwitch, "", 0, 0, "Normal/Regular"});
  }
}

void Engine::release(Tick t) {
  for (auto& j : jobs_) {
    if (j.abs_deadline != t || j.release > t) continue;
    const Tick budget = scenario_.budget(*ts_, j.task, j.index + 1);
    if (controller_) {
      controller_->release(j, t, budget, log_);
      continue;
    }
    const Task& task = (*ts_)[j.task];
    j.index += 1;
    j.status = JobStatus::Ready;
    j.lambda = 0;
    j.omega = TaskMode::LO;
    j.release = t;
    j.abs_deadline = t + task.period;
    j.budget = budget;
    j.discarded = false;
    log_.emit({t, EventKind::Release, task.id, j.index, j.abs_deadline, ""});
    if (task.is_hc()) log_.emit({t, EventKind::Refresh, task.id, j.index, 0, ""});
    if (options_.algorithm == Algorithm::SystemLevelDrop && sld_.mode == SystemMode::Critical && !task.is_hc()) {
      drop(j, t);
    }
  }
}

void Engine::detect_overruns(Tick t) {
  if (options_.algorithm == Algorithm::FPClassic) return;
  for (auto& j : jobs_) {
    const Task& task = (*ts_)[j.task];
    if (!task.is_hc() || j.omega != TaskMode::LO || j.done() || j.lambda < task.wcet_lo) continue;
    if (controller_) {
      controller_->on_budget_tick(j, t, log_);
      continue;
    }
    j.omega = TaskMode::HI;
    log_.emit({t, EventKind::TaskModeSwitch, task.id, j.index, j.lambda, "LO->HI"});
    if (options_.algorithm == Algorithm::SystemLevelDrop) sld_enter(j.task, t);
  }
}

void Engine::sld_enter(std::size_t task, Tick t) {
  const JobState& trig = jobs_[task];
  if (sld_.mode == SystemMode::Critical) {
    sld_until_ = std::max(sld_until_, trig.abs_deadline);
    return;
  }
  sld_.mode = SystemMode::Critical;
  sld_until_ = trig.abs_deadline;
  log_.emit({t, EventKind::SystemModeSwitch, (*ts_)[task].id, trig.index, t - trig.release, "Critical/Regular"});
  for (auto& j : jobs_) {
    if (!(*ts_)[j.task].is_hc() && !j.done() && j.release <= t) drop(j, t);
  }
}

void Engine::drop(JobState& job, Tick t) {
  const Task& task = (*ts_)[job.task];
  if (running_ == job.task) {
    log_.emit({t, EventKind::Preempt, task.id, job.index, job.lambda, "drop"});
    running_.reset();
  }
  job.status = JobStatus::Done;
  job.discarded = true;
  log_.emit({t, EventKind::Discard, task.id, job.index, 0, "drop"});
}

void Engine::dispatch(Tick t) {
  const auto next = pick(policy(), *ts_, jobs_, t);
  if (next != running_) {
    if (running_ && !jobs_[*running_].done()) {
      JobState& prev = jobs_[*running_];
      prev.status = JobStatus::Ready;
      log_.emit({t, EventKind::Preempt, (*ts_)[prev.task].id, prev.index, prev.lambda, ""});
    }
    running_ = next;
    if (next) {
      JobState& j = jobs_[*next];
      j.status = JobStatus::Running;
      log_.emit({t, EventKind::Dispatch, (*ts_)[j.task].id, j.index, j.lambda, ""});
    }
  }
  if (!running_ && !idle_) log_.emit({t, EventKind::Idle, "", 0, 0, ""});
  idle_ = !running_;
}

void Engine::check_invariants(Tick t) const {
  auto fail = [&](const std::string& what) {
    throw InvariantViolation("t=" + std::to_string(t) + ": " + what);
  };
  int running = 0;
  for (const auto& j : jobs_) {
    if (j.status == JobStatus::Running) {
      ++running;
      if (running_ != j.task) fail("running job is not the dispatched one");
    }
    if (j.lambda > j.budget) fail("job of " + (*ts_)[j.task].id + " ran past its budget");
  }
  if (running > 1) fail("more than one running job");
  const PolicyKind p = policy();
  if (pick(p, *ts_, jobs_, t) != running_) fail("running job differs from the policy's pick");
  if (!controller_) return;

  const auto& s = controller_->state();
  const bool critical = s.mode == SystemMode::Critical;
  if (critical != s.trigger.has_value()) fail("trigger set outside Critical mode");
  if (critical != (s.pattern == Pattern::Stretching)) fail("pattern Stretching outside Critical mode");
  if (s.delta < 0) fail("negative delta");
  if (controller_->total_stretched() - controller_->total_planned() != s.delta) fail("stretch debt not conserved");
  for (std::size_t i = 0; i < ts_->size(); ++i) {
    if ((*ts_)[i].is_hc()) continue;
    if (controller_->lag(i) != s.delta + controller_->pending(i)) fail("lag of " + (*ts_)[i].id + " out of balance");
  }
  if (critical != (p == PolicyKind::CritThenModeThenPriority)) fail("policy incoherent with system mode");
  if (p == PolicyKind::PriorityOnly) {
    for (const auto& j : jobs_) {
      if ((*ts_)[j.task].is_hc() && j.omega == TaskMode::HI) fail("PriorityOnly while a job is in HI");
    }
  }
}

void Engine::finish() {
  if (finished_) return;
  finished_ = true;
  advance(options_.horizon);
  if (running_) {
    const JobState& j = jobs_[*running_];
    log_.emit({options_.horizon, EventKind::Preempt, (*ts_)[j.task].id, j.index, j.lambda, "horizon"});
  }
  if (controller_) {
    collector_.metrics().dem_evaluations = controller_->stats().evaluations;
    collector_.metrics().filter_set_total = controller_->stats().filter_set_size;
  }
}

SimResult simulate(const TaskSet& ts, const Scenario& scenario, SimOptions options) {
  Engine engine(ts, scenario, options);
  return engine.run();
}

}  // namespace mcsim
