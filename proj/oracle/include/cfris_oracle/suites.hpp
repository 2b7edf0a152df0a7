// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace cfris_oracle {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Estimation invariants against Monte Carlo references.
std::vector<CheckResult> estimation_suite();
/// Phase optimizer identities and optimality references.
std::vector<CheckResult> optimizer_suite();
/// Combining and SINR identities and optimality references.
std::vector<CheckResult> receiver_suite();

/// Prints one PASS/FAIL line per check; true when all pass.
bool report(std::ostream& out, const std::vector<CheckResult>& checks);

/// Runs the three suites above.
bool run_all_suites(std::ostream& out);

}  // namespace cfris_oracle
