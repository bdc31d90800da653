#pragma once

#include <stdexcept>
#include <vector>

#include "bdg/prob_tree.hpp"

namespace bdg {

struct DegenerateProcessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pathwise functionals of an adapted process at its terminal time.
struct PathFunctionals {
  std::vector<double> s_n;       // per leaf: sqrt(sum of squared increments)
  std::vector<double> x_star;    // per leaf: max_{1<=j<=n} |X_j|
  std::vector<double> terminal;  // per leaf: X_n
  double e_sp = 0.0;             // E S_n^p
  double e_xstar_p = 0.0;        // E (X_n^*)^p
  double e_abs_p = 0.0;          // E |X_n|^p
};

PathFunctionals compute_path_functionals(const AdaptedProcess& proc, double p);

std::vector<double> square_function(const AdaptedProcess& proc);

// Running maximum of |X_j| over j = 1..n; the root X_0 = 0 is excluded.
std::vector<double> maximal_function(const AdaptedProcess& proc);

// E |leaf value|^p by exact enumeration.
double p_moment(const OutcomeTree& tree, const std::vector<double>& leaf_values,
                double p);

// E S_n^p / E (X_n^*)^p.  Throws DegenerateProcessError when E(X_n^*)^p
// vanishes (identically zero process).
double bdg_ratio(const AdaptedProcess& proc, double p);

}  // namespace bdg
