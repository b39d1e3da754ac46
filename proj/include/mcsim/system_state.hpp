#pragma once

#include <optional>

#include "mcsim/model.hpp"

namespace mcsim {

enum class SystemMode { Normal, Critical };
enum class Pattern { Regular, Stretching, Shrinking };

const char* to_string(SystemMode m);
const char* to_string(Pattern p);

// The HC task whose demand check fired, and where in its period it fired.
struct Trigger {
  std::size_t task = 0;
  Tick offset = 0;       // S, relative to the trigger job's release
  Tick switched_at = 0;  // absolute instant of the Normal -> Critical switch
  Tick expires_at = 0;   // trigger job's period end; Critical ends here
  bool operator==(const Trigger&) const = default;
};

struct SystemState {
  SystemMode mode = SystemMode::Normal;
  Pattern pattern = Pattern::Regular;
  std::optional<Trigger> trigger;
  Tick delta = 0;  // stretch debt not yet committed to a shrink plan
  std::optional<Tick> eta;  // last Critical -> Normal instant
  bool operator==(const SystemState&) const = default;
};

}  // namespace mcsim
