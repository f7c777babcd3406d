#pragma once

#include <string>
#include <vector>

#include "drotep/case.hpp"

namespace drotep::test {

inline std::string data_path(const std::string& name) {
  return std::string(DROTEP_DATA_DIR) + "/" + name;
}

inline CaseData load(const std::string& name) { return load_case(data_path(name)); }

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"toy2.json",      "garver6_d2.json",
                                              "garver6_d2_two.json", "garver6_d4.json",
                                              "garver6_d4_two.json", "garver6_d6.json"};
  return names;
}

}  // namespace drotep::test
