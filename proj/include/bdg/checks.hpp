#pragma once

#include "bdg/path_functionals.hpp"
#include "bdg/prob_tree.hpp"
#include "bdg/report.hpp"
#include "bdg/scalar_kernels.hpp"

namespace bdg {

struct SuiteConfig {
  double tol_identity = 1e-9;  // relative, scale = max(|lhs|,|rhs|,1)
  double tol_ineq = 1e-12;     // additive slack factor
  double tol_orth = 1e-10;     // absolute, cross-terms of increments
};

// E|X_n|^p versus the probability-weighted sum of F_p over consecutive node
// pairs along each leaf path.  Inapplicable on non-martingale input.
CheckReport check_moment_identity(const AdaptedProcess& proc, double p,
                                  const SuiteConfig& cfg = {});

// E S_n^2 = E X_n^2; holds for every martingale regardless of p.
CheckReport check_square_identity(const AdaptedProcess& proc,
                                  double rel_tol = 1e-12);

// max_{j != l} |E dX_j dZ_l| below tolerance; x and z must share a tree.
CheckReport check_orthogonality(const AdaptedProcess& x,
                                const AdaptedProcess& z,
                                const SuiteConfig& cfg = {});

// |E X_n Z_n| <= (E S_n^p(X))^{1/p} (E S_n^q(Z))^{1/q}.
CheckReport check_pairing(const AdaptedProcess& x, const AdaptedProcess& z,
                          double p, const SuiteConfig& cfg = {});

// E|X_n|^p <= E(X_n^*)^p <= (p/(p-1))^p E|X_n|^p, both sides.
CheckReport check_doob(const AdaptedProcess& proc, double p,
                       const SuiteConfig& cfg = {});

// c_p^p E(X_n^*)^p <= E S_n^p <= C_p^p E(X_n^*)^p, both sides.
CheckReport check_bdg(const AdaptedProcess& proc, double p,
                      const SuiteConfig& cfg = {});

// E S_n^p <= (2p)^{p/2} E(X_n^*)^p; only proved for p > 2, rejects p <= 2.
CheckReport check_garsia_bound(const AdaptedProcess& proc, double p,
                               const SuiteConfig& cfg = {});

// D_p^{-p/2} (p/(p-1))^{-p^2/2} E(X_n^*)^p <= E S_n^p, p > 2.
CheckReport check_lower_pbig(const AdaptedProcess& proc, double p,
                             const SuiteConfig& cfg = {});

// (p(p-1)/2)^{p/2} E S_n^p <= E(X_n^*)^p, p in (1,2).
CheckReport check_lower_psmall(const AdaptedProcess& proc, double p,
                               const SuiteConfig& cfg = {});

// The closed martingale of the terminal variable X_n^{<p-1>}.
AdaptedProcess dual_closure(const AdaptedProcess& x, double p);

// All applicable checks, deterministic order, exponent-range aware.
SuiteReport run_suite(const AdaptedProcess& proc, double p,
                      const SuiteConfig& cfg = {});

}  // namespace bdg
