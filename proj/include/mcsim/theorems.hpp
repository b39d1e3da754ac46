#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcsim/snapshot.hpp"

namespace mcsim {

enum class Theorem {
  T1_Normal,    // Normal mode, pivot lp_l, DEM-based bound
  T2_AllHI,     // Normal mode with every HC task in HI, pivot lp_h, DEM^c bound
  T3_Shrinking, // Shrinking pattern, pivot lp_l, DEM^delta bound
  T4_Critical,  // Critical mode, pivot the lowest HC task under Sched_C in LO, DEM^c bound
};

const char* to_string(Theorem th);
Theorem theorem_from_string(std::string_view s);

enum class AnalysisErrorKind { Inapplicable, GuardMismatch };

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(AnalysisErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  AnalysisErrorKind kind() const { return kind_; }

 private:
  AnalysisErrorKind kind_;
};

struct DemandPoint {
  std::size_t pivot = 0;
  Tick t = 0;
  Tick z = 0;
  Tick demand = 0;
  bool schedulable() const { return demand <= z; }
};

struct TheoremResult {
  bool schedulable = true;
  std::size_t pivot = 0;
  std::optional<Tick> witness;  // first z with demand > z
  std::vector<DemandPoint> curve;
};

// Candidate horizons: the pivot's current period end and each later period
// end of the pivot, up to one hyperperiod past snap.t.
std::vector<Tick> candidate_lengths(const TaskSet& ts, std::size_t pivot, const Snapshot& snap);

// Evaluates the theorem's DBF(pivot, [t, t+z]) <= z for every candidate z.
// Throws AnalysisError when the snapshot does not satisfy the theorem's guard
// or no pivot exists.
TheoremResult schedulable(Theorem th, const TaskSet& ts, const Snapshot& snap);

// pivot,t,z,demand,supply,schedulable
std::string demand_curve_csv(const TaskSet& ts, const TheoremResult& result);

}  // namespace mcsim
