#pragma once

#include <string>
#include <vector>

#include "eqflow/flow.hpp"

namespace eqflow {

struct ValidationResult {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Built-in quick checks, in run order.
const std::vector<std::string>& validation_check_names();

/// Runs one check. Flow settings (cfl, resampling, ...) come from `base`; each check
/// picks its own scenario and stop rule on top.
ValidationResult run_validation_check(const std::string& name, const FlowParams& base);

}  // namespace eqflow
