#include "mcsim/controller.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mcsim {

namespace {

Tick floor_of(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

std::string state_info(const SystemState& s) {
  return std::string(to_string(s.mode)) + "/" + to_string(s.pattern);
}

}  // namespace

std::vector<Tick> shrink_steps(const Rational& mu, std::int64_t periods, Tick amount) {
  std::vector<Tick> steps;
  Tick before = 0;
  for (std::int64_t k = 1; k <= periods; ++k) {
    const Tick upto = std::min(amount, floor_of(mu * k));
    steps.push_back(upto - before);
    before = upto;
  }
  if (before < amount) {
    if (steps.empty()) steps.push_back(0);
    steps.back() += amount - before;
  }
  while (!steps.empty() && steps.back() == 0) steps.pop_back();
  return steps;
}

std::optional<ShrinkPlan> plan_shrink(const TaskSet& ts, std::span<const JobState> jobs, Tick t, Tick delta,
                                      DemandStats* stats, TailRule tail) {
  if (delta <= 0) return std::nullopt;
  const auto pivot = lp_l(ts, jobs);
  if (!pivot) return std::nullopt;
  const Tick window = jobs[*pivot].abs_deadline - t;
  if (window <= 0) return std::nullopt;

  std::int64_t probes = 0;
  auto feasible = [&](Tick d) {
    ++probes;
    for (const auto& task : ts.tasks) {
      if (!task.is_hc() && !shrink_feasible(task, shrink_mu(task.period, d, window))) return false;
    }
    DemandQuery q{*pivot, t, jobs, std::nullopt, ShrinkParams{d, t}, stats, tail};
    try {
      return dem_delta(ts, q) <= window;
    } catch (const ModelError&) {
      return false;
    }
  };

  Tick best = 0;
  if (feasible(delta)) {
    best = delta;
  } else {
    Tick lo = 0, hi = delta;  // feasible(lo) by convention, !feasible(hi)
    while (hi - lo > 1) {
      const Tick mid = lo + (hi - lo) / 2;
      if (feasible(mid)) lo = mid;
      else hi = mid;
    }
    best = lo;
  }
  if (best == 0) return std::nullopt;

  ShrinkPlan plan;
  plan.pivot = *pivot;
  plan.eta = t;
  plan.window = window;
  plan.amount = best;
  plan.probes = probes;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (ts[j].is_hc()) continue;
    LcShrink s;
    s.task = j;
    s.mu = shrink_mu(ts[j].period, best, window);
    s.periods = ceil_div(Rational(window), Rational(ts[j].period) - s.mu);
    s.steps = shrink_steps(s.mu, s.periods, best);
    plan.tasks.push_back(std::move(s));
  }
  return plan;
}

ModeController::ModeController(const TaskSet& ts, ControllerOptions options)
    : ts_(&ts),
      options_(options),
      lag_(ts.size(), 0),
      planned_(ts.size()),
      active_step_(ts.size(), 0),
      stretched_(ts.size(), 0),
      pressure_reported_(ts.size(), false) {}

void ModeController::restore(const SystemState& state, Tick now) {
  if ((state.mode == SystemMode::Critical) != state.trigger.has_value()) {
    throw std::invalid_argument("a trigger is required exactly in Critical mode");
  }
  state_ = state;
  for (std::size_t i = 0; i < ts_->size(); ++i) {
    lag_[i] = (*ts_)[i].is_hc() ? 0 : state.delta;
    planned_[i].clear();
    active_step_[i] = 0;
    stretched_[i] = 0;
  }
  total_stretched_ = state.delta;
  total_planned_ = 0;
  next_shrink_attempt_ = now;
}

PolicyKind ModeController::active_policy(std::span<const JobState> jobs) const {
  if (state_.mode == SystemMode::Critical) return PolicyKind::CritThenModeThenPriority;
  for (const auto& j : jobs) {
    if ((*ts_)[j.task].is_hc() && j.omega == TaskMode::HI) return PolicyKind::ModeThenPriority;
  }
  return PolicyKind::PriorityOnly;
}

bool ModeController::on_budget_tick(JobState& job, Tick t, EventLog& log) {
  const Task& task = (*ts_)[job.task];
  if (!task.is_hc() || job.omega != TaskMode::LO || job.done() || job.lambda < task.wcet_lo) return false;
  job.omega = TaskMode::HI;
  log.emit({t, EventKind::TaskModeSwitch, task.id, job.index, job.lambda, "LO->HI"});
  return true;
}

ExpiryOutcome ModeController::on_period_expiry(JobState& job, Tick t, EventLog& log) {
  ExpiryOutcome out;
  const Task& task = (*ts_)[job.task];
  if (!job.done()) {
    out.missed = true;
    out.lateness = job.budget - job.lambda;
    log.emit({t, EventKind::DeadlineMiss, task.id, job.index, out.lateness, to_string(task.crit)});
    job.status = JobStatus::Done;
  }
  if (active_step_[job.task] > 0) {
    lag_[job.task] -= active_step_[job.task];
    active_step_[job.task] = 0;
    finish_pattern_if_done(t, log);
  }
  if (state_.mode == SystemMode::Critical && state_.trigger->task == job.task && state_.trigger->expires_at == t) {
    switch_back(t, log, job.index);
    out.switched_back = true;
  }
  return out;
}

void ModeController::release(JobState& job, Tick t, Tick budget, EventLog& log) {
  const Task& task = (*ts_)[job.task];
  job.index += 1;
  job.status = JobStatus::Ready;
  job.lambda = 0;
  job.omega = TaskMode::LO;
  job.release = t;
  job.budget = budget;
  job.discarded = false;
  job.abs_deadline = t + task.period;
  stretched_[job.task] = 0;
  if (!task.is_hc() && !planned_[job.task].empty()) {
    active_step_[job.task] = planned_[job.task].front();
    planned_[job.task].pop_front();
    job.abs_deadline -= active_step_[job.task];
  }
  log.emit({t, EventKind::Release, task.id, job.index, job.abs_deadline, ""});
  if (task.is_hc()) log.emit({t, EventKind::Refresh, task.id, job.index, 0, ""});
}

bool ModeController::demand_fails(std::span<const JobState> jobs, std::size_t pivot, Tick t, Tick* demand) {
  DemandQuery q{pivot, t, jobs, std::nullopt, std::nullopt, &stats_, options_.tail};
  const Tick d = dem(*ts_, q);
  if (demand) *demand = d;
  return d >= jobs[pivot].abs_deadline - t;
}

std::optional<Trigger> ModeController::check_system_switch(std::span<JobState> jobs, Tick t, EventLog& log) {
  if (state_.mode != SystemMode::Normal) return std::nullopt;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    if ((*ts_)[i].is_hc() && j.omega == TaskMode::LO && !j.done() && j.release <= t && t < j.abs_deadline) {
      pending.push_back(i);
    }
  }
  if (pending.empty()) return std::nullopt;
  std::sort(pending.begin(), pending.end(),
            [&](std::size_t a, std::size_t b) { return (*ts_)[a].priority > (*ts_)[b].priority; });
  if (options_.scan == SwitchScan::LowestPriority) pending.resize(1);

  std::optional<std::size_t> trigger;
  for (std::size_t i : pending) {
    if (demand_fails(jobs, i, t)) {
      trigger = i;
      break;
    }
  }
  if (!trigger) return std::nullopt;

  const JobState& tj = jobs[*trigger];
  Trigger trig{*trigger, t - tj.release, t, tj.abs_deadline};
  state_.mode = SystemMode::Critical;
  state_.pattern = Pattern::Stretching;
  state_.trigger = trig;
  std::fill(pressure_reported_.begin(), pressure_reported_.end(), false);
  log.emit({t, EventKind::SystemModeSwitch, (*ts_)[*trigger].id, tj.index, trig.offset, state_info(state_)});
  apply_stretch(jobs, trig.expires_at - t, t, log);
  return trig;
}

void ModeController::check_nested_pressure(std::span<const JobState> jobs, Tick t, EventLog& log) {
  if (state_.mode != SystemMode::Critical || !options_.report_nested_pressure) return;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    if (i == state_.trigger->task || pressure_reported_[i]) continue;
    if (!(*ts_)[i].is_hc() || j.omega != TaskMode::LO || j.done() || j.release > t || t >= j.abs_deadline) continue;
    Tick demand = 0;
    if (demand_fails(jobs, i, t, &demand)) {
      pressure_reported_[i] = true;
      log.emit({t, EventKind::NestedPressure, (*ts_)[i].id, j.index, demand, std::to_string(j.abs_deadline - t)});
    }
  }
}

void ModeController::apply_stretch(std::span<JobState> jobs, Tick amount, Tick t, EventLog& log) {
  if (amount <= 0) return;
  for (auto& j : jobs) {
    const Task& task = (*ts_)[j.task];
    if (task.is_hc()) continue;
    if (j.release > t) j.release += amount;
    j.abs_deadline += amount;
    lag_[j.task] += amount;
    stretched_[j.task] += amount;
    log.emit({t, EventKind::StretchApplied, task.id, j.index, amount, std::to_string(j.abs_deadline)});
    if (!j.discarded && stretched_[j.task] > task.period - task.wcet_lo) {
      j.discarded = true;
      log.emit({t, EventKind::Discard, task.id, j.index, amount, "stretch"});
    }
  }
  state_.delta += amount;
  total_stretched_ += amount;
}

void ModeController::switch_back(Tick t, EventLog& log, std::int64_t job_index) {
  if (state_.mode != SystemMode::Critical) throw std::logic_error("switch back requested in Normal mode");
  const Trigger trig = *state_.trigger;
  state_.mode = SystemMode::Normal;
  state_.trigger.reset();
  state_.eta = t;
  bool planned = false;
  for (std::size_t i = 0; i < ts_->size(); ++i) planned = planned || pending(i) > 0;
  state_.pattern = planned ? Pattern::Shrinking : Pattern::Regular;
  next_shrink_attempt_ = t;
  log.emit({t, EventKind::SystemModeSwitch, (*ts_)[trig.task].id, job_index, trig.offset, state_info(state_)});
}

bool ModeController::shrink_eligible(Tick t) const {
  if (state_.mode != SystemMode::Normal || state_.delta <= 0 || t < next_shrink_attempt_) return false;
  for (std::size_t i = 0; i < ts_->size(); ++i) {
    if (pending(i) > 0) return false;
  }
  return true;
}

std::optional<ShrinkPlan> ModeController::try_shrink(std::span<JobState> jobs, Tick t, EventLog& log) {
  if (!shrink_eligible(t)) return std::nullopt;
  auto plan = plan_shrink(*ts_, jobs, t, state_.delta, &stats_, options_.tail);
  if (const auto pivot = lp_l(*ts_, jobs)) {
    next_shrink_attempt_ = jobs[*pivot].abs_deadline;
  } else {
    Tick next = t + 1;
    bool any = false;
    for (const auto& j : jobs) {
      if ((*ts_)[j.task].is_hc() && j.abs_deadline > t && (!any || j.abs_deadline < next)) {
        next = j.abs_deadline;
        any = true;
      }
    }
    next_shrink_attempt_ = next;
  }
  if (!plan) return std::nullopt;

  for (const auto& s : plan->tasks) {
    planned_[s.task].assign(s.steps.begin(), s.steps.end());
    // LC jobs released at this very instant already belong to the window.
    JobState& j = jobs[s.task];
    if (j.release == t && j.lambda == 0 && active_step_[s.task] == 0 && !planned_[s.task].empty()) {
      active_step_[s.task] = planned_[s.task].front();
      planned_[s.task].pop_front();
      j.abs_deadline -= active_step_[s.task];
    }
  }
  state_.delta -= plan->amount;
  total_planned_ += plan->amount;
  state_.pattern = Pattern::Shrinking;
  log.emit({t, EventKind::ShrinkApplied, (*ts_)[plan->pivot].id, jobs[plan->pivot].index, plan->amount,
            "Shrinking;window=" + std::to_string(plan->window)});
  finish_pattern_if_done(t, log);
  return plan;
}

Tick ModeController::pending(std::size_t task) const {
  return std::accumulate(planned_[task].begin(), planned_[task].end(), active_step_[task]);
}

void ModeController::finish_pattern_if_done(Tick t, EventLog& log) {
  if (state_.mode != SystemMode::Normal || state_.pattern != Pattern::Shrinking) return;
  for (std::size_t i = 0; i < ts_->size(); ++i) {
    if (pending(i) > 0) return;
  }
  state_.pattern = Pattern::Regular;
  log.emit({t, EventKind::ShrinkApplied, "", 0, 0, "Regular;complete"});
}

}  // namespace mcsim
