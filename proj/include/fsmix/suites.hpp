#pragma once

// Self-verification suites behind `fsmix verify`.

#include <string>
#include <vector>

namespace fsmix {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// gaussian, posterior, ensemble-equivalence, forecasters, oco.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws ArgumentError on an unknown name.
std::vector<CheckResult> run_suite(const std::string& name);

}  // namespace fsmix
