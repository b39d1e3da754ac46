#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "mcsim/model.hpp"
#include "mcsim/system_state.hpp"
#include "mcsim/workload.hpp"

namespace mcsim {

// One consistent simulation instant: every task's current release plus the
// system-level mode state.
struct Snapshot {
  Tick t = 0;
  std::vector<JobState> jobs;  // indexed by task
  SystemState system;
  std::optional<ShrinkParams> shrink;  // active shrink window, when Pattern::Shrinking
};

// Every task freshly released on its nominal grid at instant t (all LO,
// nothing consumed, budget C_lo).
Snapshot synchronous_snapshot(const TaskSet& ts, Tick t = 0);

// Snapshot text, times in model units (scaled by the taskset's time_scale):
//
//   t = 5
//   mode = Normal            # Normal | Critical
//   pattern = Shrinking      # Regular | Stretching | Shrinking
//   delta = 12
//   eta = 5
//   trigger = pi2 offset=10 # required iff mode = Critical
//   shrink = 12              # shrink delta for the window opening at eta
//   all_omega = HI           # sets every HC job's mode before job lines apply
//   job pi1 release=0 deadline=30 lambda=0 omega=LO status=Ready budget=3
//
// Tasks without a job line get the synchronous state at t.
Snapshot parse_snapshot(std::string_view text, const TaskSet& ts);
Snapshot load_snapshot_file(const std::filesystem::path& path, const TaskSet& ts);

}  // namespace mcsim
