#pragma once

#include <string>
#include <vector>

namespace mb1d {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured numbers, or the exception that aborted it
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;

  int failure_count() const;
  bool all_passed() const { return failure_count() == 0; }
};

// Runs every self-check of the library: closed-form oracles for the
// density-matrix equations, symmetry and scaling properties, end-to-end
// propagation checks against analytic limits, spectrum/fit utilities, and
// the exact config/format round-trips. jobs bounds the worker pool used by
// the scan-based checks. inject_fault deliberately mis-signs the light shift
// inside the rotation-direction probe, which must make that check fail --
// this demonstrates the suite can actually detect a sign error.
ValidationReport run_validate_suite(int jobs = 1, bool inject_fault = false);

}  // namespace mb1d
