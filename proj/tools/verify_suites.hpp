#pragma once

#include <string>
#include <vector>

#include "mcg/errors.hpp"

namespace mcgcli {

struct SuiteResult {
  int passed = 0;
  int failed = 0;
  std::vector<std::string> lines;

  bool ok() const { return failed == 0; }
};

std::vector<std::string> suite_names();

// Runs one named golden suite; throws mcg::OutOfScope for unknown names.
SuiteResult run_suite(const std::string& name, const mcg::Ceilings& ceilings);

}  // namespace mcgcli
