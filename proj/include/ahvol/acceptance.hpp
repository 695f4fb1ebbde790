#pragma once

#include <string>
#include <vector>

namespace ahvol::acceptance {

struct Measurement {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // value <= tolerance
};

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;   // part with the largest value/tolerance
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::vector<Measurement> parts;
  std::string detail;      // error message or remarks
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion id in 1..kCriterionCount. Library errors are caught and
/// reported as a failure with the message in detail.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all();

/// "PASS [id] name measured=... tol=... (..s)"
std::string format_line(const CriterionResult& r);

}  // namespace ahvol::acceptance
