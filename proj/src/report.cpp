#include "bdg/report.hpp"

#include <algorithm>
#include <cmath>

namespace bdg {

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    case CheckStatus::DegeneratePass: return "degenerate-pass";
    case CheckStatus::Inapplicable: return "inapplicable";
  }
  return "unknown";
}

CheckReport identity_check(std::string id, std::string anchor, double lhs,
                           double rhs, double rel_tol) {
  CheckReport r;
  r.check_id = std::move(id);
  r.anchor = std::move(anchor);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = std::abs(lhs - rhs);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  r.tolerance = rel_tol * scale;
  r.pass = r.margin <= r.tolerance;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport inequality_check(std::string id, std::string anchor, double lhs,
                             double rhs, double slack) {
  CheckReport r;
  r.check_id = std::move(id);
  r.anchor = std::move(anchor);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  r.tolerance = slack * scale;
  r.pass = lhs <= rhs + r.tolerance;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

}  // namespace bdg
