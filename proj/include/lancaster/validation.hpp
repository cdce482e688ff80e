#pragma once

// The acceptance suite: ten numbered checks with one pass/fail line each.
// Shared by the acceptance test binary and `lancaster_mt validate`.

#include <iosfwd>
#include <string>
#include <vector>

namespace lancaster {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct ValidationOptions {
  /// Smaller Monte Carlo sizes; for smoke runs, not for acceptance.
  bool quick = false;
  unsigned threads = 1;
  /// Run only these ids; empty = all.
  std::vector<int> only;
};

/// Runs the checks in id order, printing each line to `os` as it finishes.
std::vector<CheckResult> run_validation(const ValidationOptions& opts, std::ostream& os);

/// "PASS  3  kappa series vs oracle  max diff 1.2e-13  (0.41 s)"
std::string format_result(const CheckResult& r);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace lancaster
