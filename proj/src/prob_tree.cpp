#include "bdg/prob_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace bdg {

namespace {

double kahan_sum(const std::vector<double>& terms) {
  double s = 0.0, c = 0.0;
  for (double x : terms) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

void require_values(const AdaptedProcess& proc) {
  if (!proc.tree) throw std::invalid_argument("process has no tree");
  if (static_cast<int>(proc.values.size()) != proc.tree->node_count())
    throw std::invalid_argument("process value count does not match tree");
  for (double v : proc.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("process contains non-finite values");
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t bits(double x) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(x));
  std::memcpy(&u, &x, sizeof(u));
  return u;
}

}  // namespace

OutcomeTree OutcomeTree::build(std::vector<TreeNode> nodes) {
  if (nodes.empty()) throw std::invalid_argument("empty tree");
  if (nodes[0].parent != -1 || nodes[0].depth != 0 ||
      nodes[0].branch_prob != 1.0)
    throw std::invalid_argument("node 0 must be the root with probability 1");

  OutcomeTree t;
  t.nodes_ = std::move(nodes);
  const int n = t.node_count();
  std::vector<double> path_prob(n, 0.0);
  path_prob[0] = 1.0;
  int root_count = 0;
  for (int i = 0; i < n; ++i) {
    const TreeNode& nd = t.nodes_[i];
    if (nd.parent == -1) {
      ++root_count;
      continue;
    }
    if (nd.parent < 0 || nd.parent >= n || nd.parent >= i)
      throw std::invalid_argument("nodes must be listed parent-first");
    const TreeNode& par = t.nodes_[nd.parent];
    if (nd.depth != par.depth + 1)
      throw std::invalid_argument("child depth must be parent depth + 1");
    if (!(nd.branch_prob > 0.0) || nd.branch_prob > 1.0)
      throw std::invalid_argument("branch probability must lie in (0, 1]");
    if (std::find(par.children.begin(), par.children.end(), i) ==
        par.children.end())
      throw std::invalid_argument("parent/child links inconsistent");
    path_prob[i] = path_prob[nd.parent] * nd.branch_prob;
  }
  if (root_count != 1) throw std::invalid_argument("tree must have one root");

  int max_depth = 0;
  for (const TreeNode& nd : t.nodes_) max_depth = std::max(max_depth, nd.depth);
  t.depth_n_ = max_depth;
  if (max_depth < 1) throw std::invalid_argument("tree must have depth >= 1");

  t.levels_.assign(max_depth + 1, {});
  for (int i = 0; i < n; ++i) {
    const TreeNode& nd = t.nodes_[i];
    t.levels_[nd.depth].push_back(i);
    if (nd.children.empty()) {
      if (nd.depth != max_depth)
        throw std::invalid_argument("all leaves must sit at the same depth");
      t.leaves_.push_back(i);
      if (!(path_prob[i] > 0.0))
        throw std::invalid_argument("leaf path probability must be positive");
      t.leaf_probs_.push_back(path_prob[i]);
    } else {
      double sum = 0.0;
      for (int c : nd.children) {
        if (c <= i || c >= n || t.nodes_[c].parent != i)
          throw std::invalid_argument("parent/child links inconsistent");
        sum += t.nodes_[c].branch_prob;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("child probabilities must sum to 1");
    }
  }
  if (std::abs(kahan_sum(t.leaf_probs_) - 1.0) > 1e-12)
    throw std::invalid_argument("leaf probabilities must sum to 1");
  return t;
}

const std::vector<int>& OutcomeTree::level(int depth) const {
  if (depth < 0 || depth > depth_n_)
    throw std::out_of_range("level out of range");
  return levels_[depth];
}

CheckReport validate_martingale(const AdaptedProcess& proc, double tol) {
  require_values(proc);
  const OutcomeTree& t = *proc.tree;
  double worst = 0.0;       // normalized
  double worst_raw = 0.0;
  for (int i = 0; i < t.node_count(); ++i) {
    const TreeNode& nd = t.node(i);
    if (nd.children.empty()) continue;
    double mean = 0.0;
    for (int c : nd.children) mean += t.node(c).branch_prob * proc.values[c];
    const double raw = std::abs(mean - proc.values[i]);
    const double norm = raw / (1.0 + std::abs(proc.values[i]));
    if (norm > worst) {
      worst = norm;
      worst_raw = raw;
    }
  }
  CheckReport r;
  r.check_id = "martingale-property";
  r.anchor = "conditional-mean-zero-increments";
  r.lhs = worst_raw;
  r.rhs = 0.0;
  r.margin = -worst_raw;
  r.tolerance = tol;
  r.pass = worst <= tol;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

bool is_martingale(const AdaptedProcess& proc, double tol) {
  return validate_martingale(proc, tol).pass;
}

std::vector<double> conditional_expectation(
    const OutcomeTree& tree, const std::vector<double>& leaf_values,
    int level) {
  if (level < 0 || level > tree.depth_n())
    throw std::out_of_range("conditioning level out of range");
  if (leaf_values.size() != tree.leaves().size())
    throw std::invalid_argument("one value per leaf required");

  std::vector<double> vals(tree.node_count(), 0.0);
  for (std::size_t i = 0; i < tree.leaves().size(); ++i)
    vals[tree.leaves()[i]] = leaf_values[i];
  for (int d = tree.depth_n() - 1; d >= level; --d) {
    for (int v : tree.level(d)) {
      const TreeNode& nd = tree.node(v);
      if (nd.children.empty()) continue;
      double mean = 0.0;
      for (int c : nd.children) mean += tree.node(c).branch_prob * vals[c];
      vals[v] = mean;
    }
  }
  std::vector<double> out;
  out.reserve(tree.level(level).size());
  for (int v : tree.level(level)) out.push_back(vals[v]);
  return out;
}

AdaptedProcess close_martingale(TreePtr tree,
                                const std::vector<double>& terminal) {
  if (!tree) throw std::invalid_argument("null tree");
  if (terminal.size() != tree->leaves().size())
    throw std::invalid_argument("one terminal value per leaf required");
  for (double v : terminal)
    if (!std::isfinite(v))
      throw std::invalid_argument("terminal values must be finite");

  AdaptedProcess proc;
  proc.tree = tree;
  proc.values.assign(tree->node_count(), 0.0);
  for (std::size_t i = 0; i < tree->leaves().size(); ++i)
    proc.values[tree->leaves()[i]] = terminal[i];
  for (int d = tree->depth_n() - 1; d >= 0; --d) {
    for (int v : tree->level(d)) {
      const TreeNode& nd = tree->node(v);
      if (nd.children.empty()) continue;
      double mean = 0.0;
      for (int c : nd.children)
        mean += tree->node(c).branch_prob * proc.values[c];
      proc.values[v] = mean;
    }
  }
  return proc;
}

TreePtr make_uniform_tree(int depth, int branching, std::int64_t leaf_cap) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (branching < 2) throw std::invalid_argument("branching must be >= 2");
  std::int64_t leaves = 1;
  for (int d = 0; d < depth; ++d) {
    leaves *= branching;
    if (leaves > leaf_cap)
      throw std::invalid_argument("tree exceeds the enumeration cap");
  }
  std::vector<TreeNode> nodes(1);
  std::vector<int> frontier{0};
  const double pb = 1.0 / branching;
  for (int d = 0; d < depth; ++d) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int k = 0; k < branching; ++k) {
        TreeNode child;
        child.parent = v;
        child.depth = d + 1;
        child.branch_prob = pb;
        const int id = static_cast<int>(nodes.size());
        nodes[v].children.push_back(id);
        nodes.push_back(child);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  return std::make_shared<const OutcomeTree>(OutcomeTree::build(std::move(nodes)));
}

AdaptedProcess gen_symmetric_walk(int depth, int depth_cap) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (depth > depth_cap)
    throw std::invalid_argument("depth exceeds the enumeration cap");
  TreePtr tree = make_uniform_tree(depth, 2);
  AdaptedProcess proc;
  proc.tree = tree;
  proc.values.assign(tree->node_count(), 0.0);
  for (int i = 1; i < tree->node_count(); ++i) {
    const TreeNode& nd = tree->node(i);
    // first child of each pair steps +1, second -1
    const auto& sib = tree->node(nd.parent).children;
    const double step = (i == sib[0]) ? 1.0 : -1.0;
    proc.values[i] = proc.values[nd.parent] + step;
  }
  return proc;
}

AdaptedProcess gen_random_martingale(int depth, int branching,
                                     std::uint64_t seed, double value_scale,
                                     std::int64_t leaf_cap) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (branching < 2) throw std::invalid_argument("branching must be >= 2");
  if (!(value_scale > 0.0))
    throw std::invalid_argument("value_scale must be positive");
  std::int64_t leaves = 1;
  for (int d = 0; d < depth; ++d) {
    leaves *= branching;
    if (leaves > leaf_cap)
      throw std::invalid_argument("tree exceeds the enumeration cap");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_real_distribution<double> inc(-value_scale, value_scale);

  std::vector<TreeNode> nodes(1);
  std::vector<double> values{0.0};
  std::vector<int> frontier{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<int> next;
    for (int v : frontier) {
      // normalized positive probabilities, resampled while any is degenerate
      std::vector<double> probs(branching);
      for (;;) {
        double sum = 0.0;
        for (double& x : probs) {
          x = uni(rng) + 1e-12;
          sum += x;
        }
        bool ok = true;
        for (double& x : probs) {
          x /= sum;
          if (x < 1e-6) ok = false;
        }
        if (ok) break;
      }
      // exact renormalization so child probabilities sum to 1 tightly
      double s = 0.0;
      for (double x : probs) s += x;
      for (double& x : probs) x /= s;

      // free increments for all but the last child; last solved for mean zero
      std::vector<double> incs(branching);
      double dot = 0.0;
      for (int k = 0; k + 1 < branching; ++k) {
        incs[k] = inc(rng);
        dot += probs[k] * incs[k];
      }
      incs[branching - 1] = -dot / probs[branching - 1];

      for (int k = 0; k < branching; ++k) {
        TreeNode child;
        child.parent = v;
        child.depth = d + 1;
        child.branch_prob = probs[k];
        const int id = static_cast<int>(nodes.size());
        nodes[v].children.push_back(id);
        nodes.push_back(child);
        values.push_back(values[v] + incs[k]);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  AdaptedProcess proc;
  proc.tree =
      std::make_shared<const OutcomeTree>(OutcomeTree::build(std::move(nodes)));
  proc.values = std::move(values);
  return proc;
}

AdaptedProcess gen_transform(const AdaptedProcess& base,
                             const std::vector<double>& multipliers,
                             double bound) {
  require_values(base);
  if (!(bound > 0.0)) throw std::invalid_argument("bound must be positive");
  const OutcomeTree& t = *base.tree;
  if (static_cast<int>(multipliers.size()) != t.node_count())
    throw std::invalid_argument("one multiplier per node required");
  for (int i = 0; i < t.node_count(); ++i) {
    const TreeNode& nd = t.node(i);
    if (nd.children.empty()) continue;
    const double m0 = multipliers[nd.children[0]];
    for (int c : nd.children) {
      if (multipliers[c] != m0)
        throw std::invalid_argument(
            "multipliers must be constant across siblings (predictability)");
      if (std::abs(multipliers[c]) > bound)
        throw std::invalid_argument("multiplier exceeds bound");
    }
  }
  AdaptedProcess out;
  out.tree = base.tree;
  out.values.assign(t.node_count(), 0.0);
  for (int i = 1; i < t.node_count(); ++i) {
    const int par = t.node(i).parent;
    const double dx = base.values[i] - base.values[par];
    out.values[i] = out.values[par] + multipliers[i] * dx;
  }
  return out;
}

double expectation(const OutcomeTree& tree,
                   const std::vector<double>& leaf_values) {
  if (leaf_values.size() != tree.leaves().size())
    throw std::invalid_argument("one value per leaf required");
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < leaf_values.size(); ++i) {
    const double y = tree.leaf_probs()[i] * leaf_values[i] - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

std::uint64_t shape_fingerprint(const OutcomeTree& tree) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, static_cast<std::uint64_t>(tree.node_count()));
  for (int i = 0; i < tree.node_count(); ++i) {
    const TreeNode& nd = tree.node(i);
    h = fnv1a(h, static_cast<std::uint64_t>(nd.children.size()));
    h = fnv1a(h, bits(nd.branch_prob));
  }
  return h;
}

std::uint64_t fingerprint(const AdaptedProcess& proc) {
  require_values(proc);
  std::uint64_t h = shape_fingerprint(*proc.tree);
  for (double v : proc.values) h = fnv1a(h, bits(v));
  return h;
}

}  // namespace bdg
