#pragma once

// Acceptance suite shared by `curvedwigner verify` and the ctest driver.

#include <filesystem>
#include <string>
#include <vector>

namespace cwig {

struct CriterionResult {
  std::string id;      // "1", "6b", "8b", ...
  std::string title;
  bool passed = false;
  std::string detail;  // measured values against thresholds
};

struct AcceptanceOptions {
  double tol_scale = 1.0;  // multiplies every threshold
  int threads = 0;
  std::filesystem::path scratch_dir;  // for the reproducibility run; empty: system temp
};

/// Identifiers in suite order.
std::vector<std::string> criterion_ids();

/// Runs one criterion; throws std::invalid_argument for an unknown id.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt = {});

/// Momentum calibration constants for s = 4, n = 0..3 as printable lines.
std::vector<std::string> calibration_report();

/// "PASS|FAIL <id> <title>: <detail>"
std::string format_result(const CriterionResult& r);

}  // namespace cwig
