#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bdg {

enum class CheckStatus {
  Pass,
  Fail,
  Skipped,         // exponent range excludes this check
  DegeneratePass,  // identically-zero process, bound holds vacuously
  Inapplicable     // preconditions not met (e.g. non-martingale input)
};

std::string to_string(CheckStatus status);

/// One verified identity or inequality with both sides, margin and tolerance.
struct CheckReport {
  std::string check_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs for inequalities, |lhs - rhs| for identities
  double tolerance = 0.0;
  bool pass = false;
  CheckStatus status = CheckStatus::Fail;
  std::string anchor;  // symbolic name of the statement being checked
};

// Identity: pass iff |lhs - rhs| <= rel_tol * max(|lhs|, |rhs|, 1).
CheckReport identity_check(std::string id, std::string anchor, double lhs,
                           double rhs, double rel_tol);

// Inequality: pass iff lhs <= rhs + slack * max(|lhs|, |rhs|, 1).
CheckReport inequality_check(std::string id, std::string anchor, double lhs,
                             double rhs, double slack);

struct SuiteReport {
  std::vector<CheckReport> checks;
  std::uint64_t fingerprint = 0;  // tree-shape/value hash of the input process
  double p = 0.0;
  bool overall_pass = false;
};

}  // namespace bdg
