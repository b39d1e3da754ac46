#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mcsim/taskset_io.hpp"

namespace mcsim::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(MCSIM_FIXTURE_DIR) / name;
}

inline TaskSet table1() { return load_taskset_file(fixture("table1.taskset")); }
inline TaskSet table2() { return load_taskset_file(fixture("table2.taskset")); }
inline TaskSet fig5() { return load_taskset_file(fixture("fig5.taskset")); }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::size_t idx(const TaskSet& ts, const std::string& id) { return *ts.index_of(id); }

}  // namespace mcsim::test
