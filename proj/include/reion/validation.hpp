#ifndef REION_VALIDATION_HPP
#define REION_VALIDATION_HPP

#include <string>
#include <vector>

#include "reion/run_config.hpp"

namespace reion {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Invariant checks over every module, evaluated on the configured ion,
// exchange and sweep. Deterministic (fixed seeds).
std::vector<CheckResult> run_validation(const RunConfig& config);

}  // namespace reion

#endif  // REION_VALIDATION_HPP
