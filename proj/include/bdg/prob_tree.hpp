#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "bdg/report.hpp"

namespace bdg {

struct TreeNode {
  int parent = -1;  // -1 at the root
  int depth = 0;
  double branch_prob = 1.0;  // P(this node | parent); 1 at the root
  std::vector<int> children;
};

/// A finite rooted tree with branch probabilities: a filtered probability
/// space at desk scale.  All leaves sit at the same depth.
class OutcomeTree {
 public:
  // Validates structure: single root at index 0, child probabilities of each
  // internal node summing to 1 within 1e-12, uniform leaf depth, leaf path
  // probabilities positive and summing to 1 within 1e-12.
  static OutcomeTree build(std::vector<TreeNode> nodes);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int i) const { return nodes_[i]; }
  int depth_n() const { return depth_n_; }
  const std::vector<int>& leaves() const { return leaves_; }
  const std::vector<double>& leaf_probs() const { return leaf_probs_; }
  const std::vector<int>& level(int depth) const;

 private:
  OutcomeTree() = default;
  std::vector<TreeNode> nodes_;
  int depth_n_ = 0;
  std::vector<int> leaves_;
  std::vector<double> leaf_probs_;
  std::vector<std::vector<int>> levels_;
};

using TreePtr = std::shared_ptr<const OutcomeTree>;

/// Real values attached to every tree node; root value is X_0 = 0.
struct AdaptedProcess {
  TreePtr tree;
  std::vector<double> values;  // indexed by node
};

// Default cap on leaf count for all generators (2^20).
inline constexpr std::int64_t kDefaultLeafCap = std::int64_t{1} << 20;

// Max over internal nodes of the normalized conditional-mean defect
// |sum_c prob(c) value(c) - value(v)| / (1 + |value(v)|); pass iff <= tol.
// Structural defects (size mismatch, non-finite values) throw.
CheckReport validate_martingale(const AdaptedProcess& proc,
                                double tol = 1e-10);
bool is_martingale(const AdaptedProcess& proc, double tol = 1e-10);

// E[Y | F_level] for Y given per leaf; returns one value per node at the
// requested depth, in node-index order.  Exact enumeration.
std::vector<double> conditional_expectation(const OutcomeTree& tree,
                                            const std::vector<double>& leaf_values,
                                            int level);

// The closed martingale Z_j = E[terminal | F_j]; equals terminal at leaves.
AdaptedProcess close_martingale(TreePtr tree,
                                const std::vector<double>& terminal);

// Uniform tree: every internal node has `branching` children of equal
// probability.  Throws if branching^depth exceeds leaf_cap.
TreePtr make_uniform_tree(int depth, int branching,
                          std::int64_t leaf_cap = kDefaultLeafCap);

// X_j = sum of j independent +-1 steps on the binary symmetric tree.
AdaptedProcess gen_symmetric_walk(int depth, int depth_cap = 20);

// Random tree probabilities and increments; the last child increment of each
// node is solved from the conditional mean-zero constraint.  Deterministic
// for a given seed.  Branch probabilities below 1e-6 are resampled.
AdaptedProcess gen_random_martingale(int depth, int branching,
                                     std::uint64_t seed,
                                     double value_scale = 1.0,
                                     std::int64_t leaf_cap = kDefaultLeafCap);

// Martingale transform: increments to each child scaled by the multiplier
// attached to that child, which must be constant across siblings
// (predictability) and bounded by `bound` in absolute value.
AdaptedProcess gen_transform(const AdaptedProcess& base,
                             const std::vector<double>& multipliers,
                             double bound);

// Sum of leaf_prob * leaf_value in index order with compensated summation.
double expectation(const OutcomeTree& tree,
                   const std::vector<double>& leaf_values);

// FNV-1a hash over tree shape, probabilities and values.
std::uint64_t fingerprint(const AdaptedProcess& proc);
std::uint64_t shape_fingerprint(const OutcomeTree& tree);

}  // namespace bdg
