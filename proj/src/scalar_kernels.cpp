#include "bdg/scalar_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace bdg {

namespace {

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("exponent p must satisfy p > 1");
}

// Golden-section minimization of f on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b));
       ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

struct SimpsonState {
  int max_depth;
  bool ok = true;
};

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth, SimpsonState& st) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth >= st.max_depth) {
    if (depth >= st.max_depth && std::abs(delta) > 15.0 * tol) st.ok = false;
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, st) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, st);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth,
                        SimpsonState& st) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  st.max_depth = max_depth;
  return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, 0, st);
}

// int_0^u |y|^{p-2} (b - y) dy for p < 2 via the substitution y = t^m with
// m = 1/(p-1), which removes the |y|^{p-2} endpoint singularity exactly.
double singular_piece(double p, double b, double u, double abs_tol,
                      int max_depth, SimpsonState& st) {
  if (u == 0.0) return 0.0;
  const double m = 1.0 / (p - 1.0);
  const double s = u > 0.0 ? 1.0 : -1.0;
  const double hi = std::pow(std::abs(u), 1.0 / m);
  auto g = [&](double t) { return m * (b - s * std::pow(t, m)); };
  return s * adaptive_simpson(g, 0.0, hi, abs_tol, max_depth, st);
}

// int_1^b |y|^{p-2} (b - y) dy, orientation-signed, singularity-aware.
double remainder_integral(double p, double b, double abs_tol, int max_depth,
                          SimpsonState& st) {
  auto f = [&](double y) {
    return std::pow(std::abs(y), p - 2.0) * (b - y);
  };
  if (p >= 2.0 || b > 0.25) {
    // integrand smooth on the hull of {1, b}
    if (b >= 1.0) return adaptive_simpson(f, 1.0, b, abs_tol, max_depth, st);
    return -adaptive_simpson(f, b, 1.0, abs_tol, max_depth, st);
  }
  // p < 2 with b at or below 0.25: route both pieces through 0 so the
  // |y|^{p-2} blow-up sits at an endpoint handled by substitution
  const double from_zero_to_one = singular_piece(p, b, 1.0, abs_tol, max_depth, st);
  const double from_zero_to_b = singular_piece(p, b, b, abs_tol, max_depth, st);
  // int_1^b = int_1^0 + int_0^b = -(0->1) + (0->b)
  return from_zero_to_b - from_zero_to_one;
}

}  // namespace

double signed_power(double x, double k) {
  if (x == 0.0) return 0.0;
  const double mag = std::pow(std::abs(x), k);
  return x > 0.0 ? mag : -mag;
}

double bregman_divergence(double p, double a, double b) {
  require_p(p);
  const double gap = b - a;
  if (a != 0.0 && std::abs(gap) <= 1e-6 * std::abs(a)) {
    // F_p(a, a(1+e)) = p(p-1)|a|^p (e^2/2 + (p-2)e^3/6 + (p-2)(p-3)e^4/24 + ...)
    const double e = gap / a;
    const double series =
        e * e * (0.5 + e * ((p - 2.0) / 6.0 + e * (p - 2.0) * (p - 3.0) / 24.0));
    return std::max(0.0, p * (p - 1.0) * std::pow(std::abs(a), p) * series);
  }
  const double v = std::pow(std::abs(b), p) - std::pow(std::abs(a), p) -
                   p * gap * signed_power(a, p - 1.0);
  return std::max(0.0, v);
}

double g_weight(double p, double a, double b) {
  require_p(p);
  const double m = std::max(std::abs(a), std::abs(b));
  if (m == 0.0) return 0.0;  // a = b = 0: both sides of the comparability vanish
  const double gap = b - a;
  return gap * gap * std::pow(m, p - 2.0);
}

double comparability_bound(double p, Side side) {
  require_p(p);
  if (side == Side::Upper && !(p >= 2.0))
    throw std::invalid_argument(
        "upper comparability constant has closed form only for p >= 2");
  if (side == Side::Lower && !(p < 2.0))
    throw std::invalid_argument(
        "lower comparability constant has closed form only for p in (1,2)");
  return p * (p - 1.0) / 2.0;
}

double estimate_comparability(double p, Side side, const ScanGrid& grid) {
  require_p(p);
  if (grid.points < 3 || !(grid.b_max > 1.0))
    throw std::invalid_argument("degenerate comparability scan grid");

  const double diag = p * (p - 1.0) / 2.0;  // limit of the ratio at b -> 1
  auto ratio = [&](double b) {
    if (std::abs(b - 1.0) < 1e-9) return diag;
    return bregman_divergence(p, 1.0, b) / g_weight(p, 1.0, b);
  };
  // sign flip so one code path minimizes in both modes
  const double s = side == Side::Lower ? 1.0 : -1.0;
  auto f = [&](double b) { return s * ratio(b); };

  double best = s * diag;
  int best_i = -1;
  const double step = 2.0 * grid.b_max / (grid.points - 1);
  for (int i = 0; i < grid.points; ++i) {
    const double b = -grid.b_max + i * step;
    const double v = f(b);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i >= 0) {
    const double lo = -grid.b_max + std::max(0, best_i - 1) * step;
    const double hi = -grid.b_max + std::min(grid.points - 1, best_i + 1) * step;
    best = std::min(best, golden_min(f, lo, hi));
  }
  return s * best;
}

std::pair<double, double> burkholder_constants(double p) {
  require_p(p);
  if (p < 2.0) {
    const double c =
        (1.0 / (p * std::sqrt(2.0))) * std::pow((p - 1.0) / p, p + 0.5);
    // sqrt(2/(p(p-1))): reciprocal root of the lower comparability constant,
    // as produced by the square-upper bound on (1,2)
    const double C = std::sqrt(2.0 / (p * (p - 1.0)));
    return {c, C};
  }
  if (p == 2.0) return {0.5, 1.0};
  const double c =
      (1.0 / (2.0 * p)) * std::pow((p - 1.0) / p, (p - 1.0) / 2.0);
  return {c, std::sqrt(2.0 * p)};
}

CheckReport power_gap_bound_check(double alpha, double b) {
  if (!(alpha >= 1.0) || !(b >= 1.0))
    throw std::invalid_argument("power_gap_bound_check requires alpha, b >= 1");
  const double lhs = std::pow(b, alpha) - 1.0;
  const double rhs = alpha * std::max(1.0, std::pow(b, alpha - 1.0)) * (b - 1.0);
  return inequality_check("power-gap", "scalar-power-gap", lhs, rhs, 1e-12);
}

double bregman_quadrature_oracle(double p, double b, double rel_tol,
                                 int max_depth) {
  require_p(p);
  if (b == 1.0) return 0.0;
  // coarse pass to fix the absolute tolerance scale
  SimpsonState coarse;
  const double rough = remainder_integral(p, b, 1e-4, 20, coarse);
  const double abs_tol = rel_tol * std::max(1.0, std::abs(rough));
  SimpsonState st;
  const double integral = remainder_integral(p, b, abs_tol, max_depth, st);
  if (!st.ok)
    throw QuadratureError("bregman quadrature did not converge within budget");
  return p * (p - 1.0) * integral;
}

PExponent PExponent::make(double p) {
  require_p(p);
  PExponent e;
  e.p = p;
  e.q = p / (p - 1.0);
  auto [c, C] = burkholder_constants(p);
  e.c_p = c;
  e.C_p = C;
  e.doob = std::pow(p / (p - 1.0), p);
  if (p < 2.0) e.d_p = p * (p - 1.0) / 2.0;
  if (p >= 2.0) e.D_p = p * (p - 1.0) / 2.0;
  return e;
}

}  // namespace bdg
