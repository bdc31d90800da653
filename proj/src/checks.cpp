#include "bdg/checks.hpp"

#include <algorithm>
#include <cmath>

namespace bdg {

namespace {

// per-leaf sum of F_p over consecutive node pairs along the path
std::vector<double> bregman_path_sums(const AdaptedProcess& proc, double p) {
  const OutcomeTree& t = *proc.tree;
  std::vector<double> acc(t.node_count(), 0.0);
  for (int i = 1; i < t.node_count(); ++i) {
    const int par = t.node(i).parent;
    acc[i] = acc[par] + bregman_divergence(p, proc.values[par], proc.values[i]);
  }
  std::vector<double> out;
  out.reserve(t.leaves().size());
  for (int leaf : t.leaves()) out.push_back(acc[leaf]);
  return out;
}

// increments[j-1][leaf] = value at depth j minus value at depth j-1 along
// that leaf's path
std::vector<std::vector<double>> path_increments(const AdaptedProcess& proc) {
  const OutcomeTree& t = *proc.tree;
  const int n = t.depth_n();
  std::vector<std::vector<double>> inc(
      n, std::vector<double>(t.leaves().size(), 0.0));
  for (std::size_t li = 0; li < t.leaves().size(); ++li) {
    int v = t.leaves()[li];
    for (int d = n; d >= 1; --d) {
      const int par = t.node(v).parent;
      inc[d - 1][li] = proc.values[v] - proc.values[par];
      v = par;
    }
  }
  return inc;
}

void require_same_tree(const AdaptedProcess& x, const AdaptedProcess& z) {
  if (!x.tree || !z.tree) throw std::invalid_argument("process has no tree");
  if (x.tree != z.tree &&
      shape_fingerprint(*x.tree) != shape_fingerprint(*z.tree))
    throw std::invalid_argument("processes live on different trees");
}

CheckReport skipped(std::string id, std::string anchor) {
  CheckReport r;
  r.check_id = std::move(id);
  r.anchor = std::move(anchor);
  r.pass = true;
  r.status = CheckStatus::Skipped;
  return r;
}

CheckReport degenerate(std::string id, std::string anchor) {
  CheckReport r;
  r.check_id = std::move(id);
  r.anchor = std::move(anchor);
  r.pass = true;
  r.status = CheckStatus::DegeneratePass;
  return r;
}

bool is_degenerate(const PathFunctionals& pf) {
  return !(pf.e_xstar_p > 1e-300);
}

// combine the two one-sided margins of a sandwich into one report
CheckReport two_sided(std::string id, std::string anchor, double lower,
                      double mid, double upper, double slack) {
  CheckReport lo = inequality_check(id, anchor, lower, mid, slack);
  CheckReport hi = inequality_check(id, anchor, mid, upper, slack);
  CheckReport r;
  r.check_id = std::move(id);
  r.anchor = std::move(anchor);
  r.lhs = mid;
  r.rhs = upper;
  r.margin = std::min(lo.margin, hi.margin);
  r.tolerance = std::max(lo.tolerance, hi.tolerance);
  r.pass = lo.pass && hi.pass;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

}  // namespace

CheckReport check_moment_identity(const AdaptedProcess& proc, double p,
                                  const SuiteConfig& cfg) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  if (!is_martingale(proc)) {
    CheckReport r;
    r.check_id = "moment-identity";
    r.anchor = "terminal-moment-equals-bregman-sum";
    r.pass = true;
    r.status = CheckStatus::Inapplicable;
    return r;
  }
  const PathFunctionals pf = compute_path_functionals(proc, p);
  const double rhs = expectation(*proc.tree, bregman_path_sums(proc, p));
  return identity_check("moment-identity", "terminal-moment-equals-bregman-sum",
                        pf.e_abs_p, rhs, cfg.tol_identity);
}

CheckReport check_square_identity(const AdaptedProcess& proc, double rel_tol) {
  const PathFunctionals pf = compute_path_functionals(proc, 2.0);
  return identity_check("square-identity", "square-function-second-moment",
                        pf.e_sp, pf.e_abs_p, rel_tol);
}

CheckReport check_orthogonality(const AdaptedProcess& x,
                                const AdaptedProcess& z,
                                const SuiteConfig& cfg) {
  require_same_tree(x, z);
  const auto incx = path_increments(x);
  const auto incz = path_increments(z);
  const int n = x.tree->depth_n();
  double worst = 0.0;
  std::vector<double> prod(x.tree->leaves().size());
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      if (j == l) continue;
      for (std::size_t li = 0; li < prod.size(); ++li)
        prod[li] = incx[j][li] * incz[l][li];
      worst = std::max(worst, std::abs(expectation(*x.tree, prod)));
    }
  }
  CheckReport r;
  r.check_id = "orthogonality";
  r.anchor = "cross-increment-orthogonality";
  r.lhs = worst;
  r.rhs = 0.0;
  r.margin = -worst;
  r.tolerance = cfg.tol_orth;
  r.pass = worst <= cfg.tol_orth;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport check_pairing(const AdaptedProcess& x, const AdaptedProcess& z,
                          double p, const SuiteConfig& cfg) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  require_same_tree(x, z);
  const double q = p / (p - 1.0);
  const PathFunctionals px = compute_path_functionals(x, p);
  const PathFunctionals pz = compute_path_functionals(z, q);

  std::vector<double> prod(px.terminal.size());
  for (std::size_t i = 0; i < prod.size(); ++i)
    prod[i] = px.terminal[i] * pz.terminal[i];
  const double lhs = std::abs(expectation(*x.tree, prod));
  const double rhs =
      std::pow(px.e_sp, 1.0 / p) * std::pow(pz.e_sp, 1.0 / q);
  if (lhs == 0.0 && rhs == 0.0)
    return degenerate("holder-pairing", "increment-pairing-bound");
  return inequality_check("holder-pairing", "increment-pairing-bound", lhs,
                          rhs, cfg.tol_ineq);
}

CheckReport check_doob(const AdaptedProcess& proc, double p,
                       const SuiteConfig& cfg) {
  const PExponent e = PExponent::make(p);
  const PathFunctionals pf = compute_path_functionals(proc, p);
  return two_sided("doob", "maximal-function-sandwich", pf.e_abs_p,
                   pf.e_xstar_p, e.doob * pf.e_abs_p, cfg.tol_ineq);
}

CheckReport check_bdg(const AdaptedProcess& proc, double p,
                      const SuiteConfig& cfg) {
  const PExponent e = PExponent::make(p);
  const PathFunctionals pf = compute_path_functionals(proc, p);
  if (is_degenerate(pf))
    return degenerate("burkholder-envelope", "square-function-sandwich");
  return two_sided("burkholder-envelope", "square-function-sandwich",
                   std::pow(e.c_p, p) * pf.e_xstar_p, pf.e_sp,
                   std::pow(e.C_p, p) * pf.e_xstar_p, cfg.tol_ineq);
}

CheckReport check_garsia_bound(const AdaptedProcess& proc, double p,
                               const SuiteConfig& cfg) {
  if (!(p > 2.0))
    throw std::invalid_argument("this bound is only available for p > 2");
  const PathFunctionals pf = compute_path_functionals(proc, p);
  return inequality_check("garsia-upper", "square-function-upper-large-p",
                          pf.e_sp, std::pow(2.0 * p, p / 2.0) * pf.e_xstar_p,
                          cfg.tol_ineq);
}

CheckReport check_lower_pbig(const AdaptedProcess& proc, double p,
                             const SuiteConfig& cfg) {
  if (!(p > 2.0))
    throw std::invalid_argument("this bound is only available for p > 2");
  const PathFunctionals pf = compute_path_functionals(proc, p);
  if (is_degenerate(pf))
    return degenerate("intermediate-lower-large-p",
                      "square-function-lower-large-p");
  const double Dp = p * (p - 1.0) / 2.0;
  const double lhs = std::pow(Dp, -p / 2.0) *
                     std::pow(p / (p - 1.0), -p * p / 2.0) * pf.e_xstar_p;
  return inequality_check("intermediate-lower-large-p",
                          "square-function-lower-large-p", lhs, pf.e_sp,
                          cfg.tol_ineq);
}

CheckReport check_lower_psmall(const AdaptedProcess& proc, double p,
                               const SuiteConfig& cfg) {
  if (!(p > 1.0 && p < 2.0))
    throw std::invalid_argument("this bound is only available for p in (1,2)");
  const PathFunctionals pf = compute_path_functionals(proc, p);
  if (is_degenerate(pf))
    return degenerate("square-upper-small-p", "square-function-upper-small-p");
  const double dp = p * (p - 1.0) / 2.0;
  // d_p^{p/2} E S_n^p <= E (X_n^*)^p
  const double lhs = std::pow(dp, p / 2.0) * pf.e_sp;
  return inequality_check("square-upper-small-p",
                          "square-function-upper-small-p", lhs, pf.e_xstar_p,
                          cfg.tol_ineq);
}

AdaptedProcess dual_closure(const AdaptedProcess& x, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  const OutcomeTree& t = *x.tree;
  std::vector<double> terminal;
  terminal.reserve(t.leaves().size());
  for (int leaf : t.leaves())
    terminal.push_back(signed_power(x.values[leaf], p - 1.0));
  return close_martingale(x.tree, terminal);
}

SuiteReport run_suite(const AdaptedProcess& proc, double p,
                      const SuiteConfig& cfg) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  SuiteReport suite;
  suite.p = p;
  suite.fingerprint = fingerprint(proc);

  auto add = [&](CheckReport r) { suite.checks.push_back(std::move(r)); };

  add(validate_martingale(proc));
  add(check_square_identity(proc));
  add(check_moment_identity(proc, p, cfg));
  add(check_doob(proc, p, cfg));
  add(check_bdg(proc, p, cfg));
  add(p > 2.0 ? check_garsia_bound(proc, p, cfg)
              : skipped("garsia-upper", "square-function-upper-large-p"));
  add(p > 2.0 ? check_lower_pbig(proc, p, cfg)
              : skipped("intermediate-lower-large-p",
                        "square-function-lower-large-p"));
  add(p < 2.0 ? check_lower_psmall(proc, p, cfg)
              : skipped("square-upper-small-p",
                        "square-function-upper-small-p"));

  const AdaptedProcess z = dual_closure(proc, p);
  const double q = p / (p - 1.0);
  std::vector<double> x_term, z_term;
  for (int leaf : proc.tree->leaves()) x_term.push_back(proc.values[leaf]);
  for (int leaf : z.tree->leaves()) z_term.push_back(z.values[leaf]);
  add(identity_check("dual-moment", "conjugate-moment-identity",
                     p_moment(*z.tree, z_term, q),
                     p_moment(*proc.tree, x_term, p), 1e-10));
  add(check_orthogonality(proc, z, cfg));
  add(check_pairing(proc, z, p, cfg));

  suite.overall_pass = std::all_of(suite.checks.begin(), suite.checks.end(),
                                   [](const CheckReport& r) { return r.pass; });
  return suite;
}

}  // namespace bdg
