#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mcsim/model.hpp"

namespace mcsim {

// PriorityOnly is Sched, ModeThenPriority is Sched_I and
// CritThenModeThenPriority is Sched_C.
enum class PolicyKind { PriorityOnly, ModeThenPriority, CritThenModeThenPriority };

const char* to_string(PolicyKind p);

// Released, not past its period end, and not finished.
bool ready(const JobState& job, Tick t);

// Tasks of `candidates` with strictly higher priority than `pivot`.
std::vector<std::size_t> hp(const TaskSet& ts, std::size_t pivot, std::span<const std::size_t> candidates);
std::vector<std::size_t> hp(const TaskSet& ts, std::size_t pivot);

// Position in `jobs` of the ready job that wins under `policy`, or nullopt
// when nothing is ready (the processor idles). LC jobs rank as mode LO.
std::optional<std::size_t> pick(PolicyKind policy, const TaskSet& ts, std::span<const JobState> jobs, Tick t);

// True when `a` is preferred over `b` under `policy`.
bool outranks(PolicyKind policy, const TaskSet& ts, const JobState& a, const JobState& b);

}  // namespace mcsim
