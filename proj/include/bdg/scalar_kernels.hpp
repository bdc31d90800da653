#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "bdg/report.hpp"

namespace bdg {

/// An exponent p in (1, inf) bundled with every derived constant.
struct PExponent {
  double p;
  double q;     // conjugate, q = p/(p-1)
  double c_p;   // lower square-function constant
  double C_p;   // upper square-function constant
  double doob;  // (p/(p-1))^p
  std::optional<double> d_p;  // lower comparability constant, closed form on (1,2)
  std::optional<double> D_p;  // upper comparability constant, closed form on [2,inf)

  static PExponent make(double p);
};

enum class Side { Lower, Upper };

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |x|^k * sign(x), with 0 mapped to 0 for every k.
double signed_power(double x, double k);

// F_p(a,b) = |b|^p - |a|^p - p(b-a)*a^{<p-1>}, nonnegative by convexity.
// Near the diagonal (|b-a| <= 1e-6 |a|) a series form of the remainder
// integral is used to avoid catastrophic cancellation.
double bregman_divergence(double p, double a, double b);

// G_p(a,b) = (b-a)^2 * max(|a|,|b|)^{p-2}.  G_p(0,0) is defined as 0
// (the indeterminate 0 * 0^{negative} case for p < 2).
double g_weight(double p, double a, double b);

// p(p-1)/2: valid for Side::Upper when p >= 2 and Side::Lower when p in (1,2).
double comparability_bound(double p, Side side);

struct ScanGrid {
  double b_max = 100.0;
  int points = 10000;
};

// Numerical inf/sup of F_p(1,b)/G_p(1,b) over b in [-b_max, b_max]:
// grid scan plus golden-section refinement around the grid extremum.
// Covers the side the closed form p(p-1)/2 does not.
double estimate_comparability(double p, Side side, const ScanGrid& grid = {});

// (c_p, C_p) for the two-sided square-function bound; piecewise in p.
std::pair<double, double> burkholder_constants(double p);

// Checks b^alpha - 1 <= alpha * max(1, b^{alpha-1}) * (b - 1) for alpha,b >= 1.
CheckReport power_gap_bound_check(double alpha, double b);

// p(p-1) * int_1^b |y|^{p-2}(b-y) dy by adaptive quadrature; independent
// oracle for bregman_divergence(p, 1, b).  Throws QuadratureError if the
// subdivision budget is exhausted before the tolerance is met.
double bregman_quadrature_oracle(double p, double b, double rel_tol = 1e-11,
                                 int max_depth = 48);

}  // namespace bdg
