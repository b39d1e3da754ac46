#include "mcsim/workload.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace mcsim {

Tick psi(Tick wcet, Tick period, Tick lambda_at_a, Interval iv) {
  if (iv.b < iv.a) throw std::invalid_argument("interval with b < a");
  const Tick z = iv.length();
  const Tick whole = z / period;
  const Tick jobs = (z % period >= wcet) ? whole + 1 : whole;  // ceil when the tail holds C (tail > 0 since C > 0)
  return wcet - lambda_at_a + wcet * jobs;
}

Tick psi_hi(const Task& task, Tick lambda_at_a, Interval iv) {
  return psi(task.wcet_hi, task.period, lambda_at_a, iv);
}

Tick psi_lo(const Task& task, Tick lambda_at_a, Interval iv) {
  return psi(task.wcet_lo, task.period, lambda_at_a, iv);
}

Tick interference(const Task& task, const JobState& job, TaskMode level, Tick t, Tick end, TailRule tail) {
  const Tick c = task.wcet(level);
  Tick consumed = c;
  Tick next_release = job.release;
  if (job.release <= t) {
    next_release = job.abs_deadline;
    if (!job.done()) consumed = std::min(job.lambda, c);
  }
  const Tick a = std::clamp(next_release, std::min(t, end), end);
  if (tail == TailRule::WholeJobs) return psi(c, task.period, consumed, {a, end});
  const Tick z = end - a;
  return c - consumed + c * (z / task.period) + std::min(c, z % task.period);
}

namespace {

void note(const DemandQuery& q, std::int64_t set_size) {
  if (q.stats) q.stats->filter_set_size += set_size;
}

bool higher(const TaskSet& ts, std::size_t j, std::size_t pivot) {
  return ts[j].priority < ts[pivot].priority;
}

void check_query(const TaskSet& ts, const DemandQuery& q) {
  if (q.jobs.size() != ts.size()) throw std::invalid_argument("snapshot must hold one job per task");
  if (q.pivot >= ts.size()) throw std::invalid_argument("pivot out of range");
}

// Number of releases at eta + k*(T - mu) for k < n (n shrunk periods tiling the
// anchor window), then on the nominal grid, that fall before `end`.
std::int64_t shrunk_releases(const Task& task, const Rational& mu, Tick anchor_window, Tick eta, Tick end) {
  if (end <= eta) return 0;
  const Rational shrunk = Rational(task.period) - mu;
  const std::int64_t n = ceil_div(Rational(anchor_window), shrunk);
  const Rational covered = shrunk * n;
  const Rational span(end - eta);
  if (span <= covered) return ceil_div(span, shrunk);
  return n + ceil_div(span - covered, Rational(task.period));
}

Tick shrunk_lc_load(const TaskSet& ts, const DemandQuery& q, Tick end) {
  const auto& shrink = *q.lc_shrink;
  const Tick anchor_window = q.jobs[q.pivot].abs_deadline - shrink.eta;
  Tick total = 0;
  std::int64_t members = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (ts[j].is_hc() || !higher(ts, j, q.pivot)) continue;
    ++members;
    const Rational mu = shrink_mu(ts[j].period, shrink.delta, anchor_window);
    if (!shrink_feasible(ts[j], mu)) {
      throw ModelError(ModelErrorKind::InfeasibleShrink, "infeasible shrink: " + ts[j].id);
    }
    total += ts[j].wcet_lo * shrunk_releases(ts[j], mu, anchor_window, shrink.eta, end);
  }
  note(q, members);
  return total;
}

}  // namespace

Tick w_h_hi(const TaskSet& ts, const DemandQuery& q) {
  check_query(ts, q);
  Tick total = 0;
  std::int64_t members = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (j == q.pivot || !ts[j].is_hc() || q.jobs[j].omega != TaskMode::HI) continue;
    ++members;
    total += interference(ts[j], q.jobs[j], TaskMode::HI, q.t, q.end(), q.tail);
  }
  note(q, members);
  return total;
}

Tick w_h_lo(const TaskSet& ts, const DemandQuery& q) {
  check_query(ts, q);
  Tick total = 0;
  std::int64_t members = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (!ts[j].is_hc() || !higher(ts, j, q.pivot) || q.jobs[j].omega != TaskMode::LO) continue;
    ++members;
    total += interference(ts[j], q.jobs[j], TaskMode::LO, q.t, q.end(), q.tail);
  }
  note(q, members);
  return total;
}

Tick w_l(const TaskSet& ts, const DemandQuery& q) {
  check_query(ts, q);
  Tick total = 0;
  std::int64_t members = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (ts[j].is_hc() || !higher(ts, j, q.pivot)) continue;
    ++members;
    total += interference(ts[j], q.jobs[j], TaskMode::LO, q.t, q.end(), q.tail);
  }
  note(q, members);
  return total;
}

Tick dem(const TaskSet& ts, const DemandQuery& q) {
  check_query(ts, q);
  if (q.stats) ++q.stats->evaluations;
  const JobState& own = q.jobs[q.pivot];
  return w_h_hi(ts, q) + w_h_lo(ts, q) + w_l(ts, q) +
         interference(ts[q.pivot], own, TaskMode::LO, q.t, q.end(), q.tail);
}

Tick dem_c(const TaskSet& ts, const DemandQuery& q) {
  check_query(ts, q);
  if (q.stats) ++q.stats->evaluations;
  Tick total = 0;
  std::int64_t members = 0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (j == q.pivot || !ts[j].is_hc() || !higher(ts, j, q.pivot) || q.jobs[j].omega != TaskMode::HI) continue;
    ++members;
    total += interference(ts[j], q.jobs[j], TaskMode::HI, q.t, q.end(), q.tail);
  }
  note(q, members);
  return total + interference(ts[q.pivot], q.jobs[q.pivot], TaskMode::HI, q.t, q.end(), q.tail);
}

std::int64_t ceil_div(const Rational& a, const Rational& b) {
  const Rational q = a / b;
  const std::int64_t n = q.numerator();
  const std::int64_t d = q.denominator();
  std::int64_t fl = n / d;
  if ((n % d != 0) && (n < 0)) --fl;
  return (n % d == 0) ? fl : fl + 1;
}

Rational shrink_mu(Tick period, Tick delta, Tick window) {
  if (window <= 0) throw std::invalid_argument("shrink window must be positive");
  if (delta < 0) throw std::invalid_argument("shrink delta must be non-negative");
  return Rational(period * delta, window + delta);
}

bool shrink_feasible(const Task& task, const Rational& mu) {
  return Rational(task.period) - mu >= Rational(task.wcet_lo);
}

Tick w_l_shrunk(const TaskSet& ts, const DemandQuery& q) {
  check_query(ts, q);
  if (!q.lc_shrink) throw std::invalid_argument("w_l_shrunk needs shrink parameters");
  return shrunk_lc_load(ts, q, q.end());
}

Tick dem_delta(const TaskSet& ts, const DemandQuery& q) {
  check_query(ts, q);
  if (!q.lc_shrink) throw std::invalid_argument("dem_delta needs shrink parameters");
  if (q.stats) ++q.stats->evaluations;
  return w_h_hi(ts, q) + w_h_lo(ts, q) + w_l_shrunk(ts, q) +
         interference(ts[q.pivot], q.jobs[q.pivot], TaskMode::LO, q.t, q.end(), q.tail);
}

Tick dbf(DbfKind kind, const TaskSet& ts, std::size_t pivot, Interval iv, std::span<const JobState> jobs,
         std::optional<ShrinkParams> shrink, DemandStats* stats) {
  DemandQuery q{pivot, iv.a, jobs, iv.b, shrink, stats};
  switch (kind) {
    case DbfKind::Normal: return dem(ts, q);
    case DbfKind::Critical: return dem_c(ts, q);
    case DbfKind::Shrink:
      if (!shrink) throw std::invalid_argument("shrink dbf needs shrink parameters");
      return dem_delta(ts, q);
  }
  return 0;
}

std::optional<std::size_t> lp_l(const TaskSet& ts, std::span<const JobState> jobs) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!ts[i].is_hc() || jobs[i].omega != TaskMode::LO) continue;
    if (!best || ts[i].priority > ts[*best].priority) best = i;
  }
  return best;
}

std::optional<std::size_t> lp_h(const TaskSet& ts, std::span<const JobState> jobs) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!ts[i].is_hc() || jobs[i].omega != TaskMode::HI) continue;
    if (!best || ts[i].priority > ts[*best].priority) best = i;
  }
  return best;
}

}  // namespace mcsim
