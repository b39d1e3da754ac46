#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mcsim/model.hpp"

namespace mcsim {

// Taskset text format, one directive per line, '#' starts a comment:
//
//   time_scale = 10
//   task pi1 period=55 wcet_lo=8 wcet_hi=8.9 crit=HC priority=6
//   task pi7 period=400 wcet_lo=6.5 wcet_hi=- crit=LC priority=14
//
// Times are model-time units written as integers, decimals ("8.9") or
// fractions ("37/3"); each is multiplied by time_scale and must land on an
// integral tick. LC tasks may omit wcet_hi or write "-". time_scale must
// appear before the first task line and defaults to 1.
TaskSet load_taskset(std::string_view text);
TaskSet load_taskset_file(const std::filesystem::path& path);

// Inverse of load_taskset: parse(serialize(ts)) == ts.
std::string serialize(const TaskSet& ts);

// Parses "12", "8.9", "-3", "37/3" exactly.
Rational parse_quantity(std::string_view text);
// Converts model-time to ticks; throws ModelError(NonIntegralTicks).
Tick to_ticks(const Rational& model_time, std::int64_t time_scale);
// Shortest exact text for ticks / time_scale ("8.9", "12", "37/3").
std::string format_ticks(Tick ticks, std::int64_t time_scale);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace mcsim
