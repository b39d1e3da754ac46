#include "mcsim/theorems.hpp"

#include <sstream>

namespace mcsim {

const char* to_string(Theorem th) {
  switch (th) {
    case Theorem::T1_Normal: return "T1";
    case Theorem::T2_AllHI: return "T2";
    case Theorem::T3_Shrinking: return "T3";
    case Theorem::T4_Critical: return "T4";
  }
  return "?";
}

Theorem theorem_from_string(std::string_view s) {
  if (s == "T1" || s == "T1_Normal") return Theorem::T1_Normal;
  if (s == "T2" || s == "T2_AllHI") return Theorem::T2_AllHI;
  if (s == "T3" || s == "T3_Shrinking") return Theorem::T3_Shrinking;
  if (s == "T4" || s == "T4_Critical") return Theorem::T4_Critical;
  throw std::invalid_argument("unknown theorem: " + std::string(s));
}

std::vector<Tick> candidate_lengths(const TaskSet& ts, std::size_t pivot, const Snapshot& snap) {
  const Tick first = snap.jobs[pivot].abs_deadline - snap.t;
  const Tick limit = std::max(first, ts.hyperperiod());
  std::vector<Tick> out;
  for (Tick z = first; z <= limit; z += ts[pivot].period) out.push_back(z);
  return out;
}

namespace {

[[noreturn]] void guard(const char* th, const std::string& why) {
  throw AnalysisError(AnalysisErrorKind::GuardMismatch, std::string(th) + " guard not met: " + why);
}

[[noreturn]] void inapplicable(const char* th, const std::string& why) {
  throw AnalysisError(AnalysisErrorKind::Inapplicable, std::string("theorem inapplicable (") + th + "): " + why);
}

}  // namespace

TheoremResult schedulable(Theorem th, const TaskSet& ts, const Snapshot& snap) {
  if (snap.jobs.size() != ts.size()) throw std::invalid_argument("snapshot must hold one job per task");
  const char* name = to_string(th);
  std::optional<std::size_t> pivot;
  DbfKind kind = DbfKind::Normal;
  std::optional<ShrinkParams> shrink;

  switch (th) {
    case Theorem::T1_Normal:
      if (snap.system.mode != SystemMode::Normal) guard(name, "mode is not Normal");
      pivot = lp_l(ts, snap.jobs);
      if (!pivot) inapplicable(name, "no HC task in LO");
      break;
    case Theorem::T2_AllHI:
      if (snap.system.mode != SystemMode::Normal) guard(name, "mode is not Normal");
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i].is_hc() && snap.jobs[i].omega != TaskMode::HI) guard(name, ts[i].id + " is not in HI");
      }
      pivot = lp_h(ts, snap.jobs);
      if (!pivot) inapplicable(name, "no HC task in HI");
      kind = DbfKind::Critical;
      break;
    case Theorem::T3_Shrinking:
      if (snap.system.mode != SystemMode::Normal || snap.system.pattern != Pattern::Shrinking) {
        guard(name, "pattern is not Shrinking");
      }
      if (!snap.shrink) guard(name, "no shrink window");
      pivot = lp_l(ts, snap.jobs);
      if (!pivot) inapplicable(name, "no HC task in LO");
      kind = DbfKind::Shrink;
      shrink = snap.shrink;
      break;
    case Theorem::T4_Critical:
      if (snap.system.mode != SystemMode::Critical) guard(name, "mode is not Critical");
      // Under Sched_C the last HC task is the lowest-priority one in LO.
      pivot = lp_l(ts, snap.jobs);
      if (!pivot) inapplicable(name, "no HC task in LO");
      kind = DbfKind::Critical;
      break;
  }

  TheoremResult result;
  result.pivot = *pivot;
  for (Tick z : candidate_lengths(ts, *pivot, snap)) {
    const Tick demand = dbf(kind, ts, *pivot, {snap.t, snap.t + z}, snap.jobs, shrink);
    DemandPoint p{*pivot, snap.t, z, demand};
    result.curve.push_back(p);
    if (!p.schedulable() && result.schedulable) {
      result.schedulable = false;
      result.witness = z;
    }
  }
  return result;
}

std::string demand_curve_csv(const TaskSet& ts, const TheoremResult& result) {
  std::ostringstream os;
  os << "pivot,t,z,demand,supply,schedulable\n";
  for (const auto& p : result.curve) {
    os << ts[p.pivot].id << ',' << p.t << ',' << p.z << ',' << p.demand << ',' << p.z << ','
       << (p.schedulable() ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace mcsim
