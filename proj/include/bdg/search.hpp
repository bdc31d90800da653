#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bdg/path_functionals.hpp"
#include "bdg/prob_tree.hpp"

namespace bdg {

enum class Direction { Minimize, Maximize };

Direction parse_direction(const std::string& s);  // "minimize" / "maximize"

/// Martingales on a fixed tree, parameterized by free child increments.
/// Each internal node with k children contributes k-1 free increments; the
/// last child's increment is solved from the conditional mean-zero
/// constraint, so every decode is a martingale by construction.
struct SearchSpace {
  TreePtr tree;
  std::vector<std::pair<int, int>> layout;  // (node, child slot) per parameter

  static SearchSpace over(TreePtr tree);
  std::size_t param_count() const { return layout.size(); }
};

struct SearchTrace {
  std::uint64_t evaluations = 0;
  int iterations = 0;
  int restarts_used = 0;
  std::vector<double> improvements;  // best ratio after each accepted move
};

struct SearchResult {
  std::vector<double> best_params;
  double best_ratio = 0.0;
  Direction objective = Direction::Minimize;
  double p = 0.0;
  SearchTrace trace;
  AdaptedProcess certificate;
};

AdaptedProcess decode(const SearchSpace& space, std::span<const double> params);

// The ratio E S_n^p / E(X_n^*)^p of the decoded martingale, negated for
// minimization so that larger is always better.  Degenerate candidates score
// -inf.  Every finite evaluation is asserted against the two-sided constant
// envelope; a violation throws (it would indicate an implementation bug).
double objective(const SearchSpace& space, std::span<const double> params,
                 double p, Direction dir, SearchTrace* trace = nullptr);

// Coordinate-wise perturbation descent: step starts at 1.0, halves on a full
// sweep without improvement, floors at 1e-6.  Deterministic given the start.
SearchResult local_search(const SearchSpace& space, std::vector<double> start,
                          double p, Direction dir, std::uint64_t budget);

// Best of local_search over deterministic starts: the symmetric-walk start,
// the level-alternating +-1 transform start, then pseudo-random unit-scale
// starts drawn from `seed`.
SearchResult multi_restart_search(const SearchSpace& space, double p,
                                  Direction dir, int restarts,
                                  std::uint64_t seed, std::uint64_t budget);

struct ScanRow {
  double p = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double cp_pow = 0.0;  // c_p^p
  double Cp_pow = 0.0;  // C_p^p
  bool pass = false;
  std::string error;  // nonempty if this row failed to evaluate
};

// Per-p verification plus a small two-direction search on the family
// martingale's tree; each row compares the observed ratio envelope against
// the constants.
std::vector<ScanRow> p_scan(const AdaptedProcess& family,
                            const std::vector<double>& p_grid,
                            int restarts = 5, std::uint64_t budget = 400,
                            std::uint64_t seed = 1);

}  // namespace bdg
