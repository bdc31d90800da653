#include "bdg/path_functionals.hpp"

#include <algorithm>
#include <cmath>

namespace bdg {

namespace {

void require_valid(const AdaptedProcess& proc) {
  if (!proc.tree) throw std::invalid_argument("process has no tree");
  if (static_cast<int>(proc.values.size()) != proc.tree->node_count())
    throw std::invalid_argument("process value count does not match tree");
}

}  // namespace

std::vector<double> square_function(const AdaptedProcess& proc) {
  require_valid(proc);
  const OutcomeTree& t = *proc.tree;
  std::vector<double> sumsq(t.node_count(), 0.0);  // S_0 = 0 at the root
  for (int i = 1; i < t.node_count(); ++i) {
    const int par = t.node(i).parent;
    const double d = proc.values[i] - proc.values[par];
    sumsq[i] = sumsq[par] + d * d;
  }
  std::vector<double> out;
  out.reserve(t.leaves().size());
  for (int leaf : t.leaves()) out.push_back(std::sqrt(sumsq[leaf]));
  return out;
}

std::vector<double> maximal_function(const AdaptedProcess& proc) {
  require_valid(proc);
  const OutcomeTree& t = *proc.tree;
  std::vector<double> run(t.node_count(), 0.0);
  for (int i = 1; i < t.node_count(); ++i) {
    const int par = t.node(i).parent;
    run[i] = std::max(run[par], std::abs(proc.values[i]));
  }
  std::vector<double> out;
  out.reserve(t.leaves().size());
  for (int leaf : t.leaves()) out.push_back(run[leaf]);
  return out;
}

double p_moment(const OutcomeTree& tree, const std::vector<double>& leaf_values,
                double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p_moment requires p > 0");
  std::vector<double> powered(leaf_values.size());
  for (std::size_t i = 0; i < leaf_values.size(); ++i)
    powered[i] = std::pow(std::abs(leaf_values[i]), p);
  return expectation(tree, powered);
}

PathFunctionals compute_path_functionals(const AdaptedProcess& proc, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  PathFunctionals pf;
  pf.s_n = square_function(proc);
  pf.x_star = maximal_function(proc);
  const OutcomeTree& t = *proc.tree;
  pf.terminal.reserve(t.leaves().size());
  for (int leaf : t.leaves()) pf.terminal.push_back(proc.values[leaf]);
  pf.e_sp = p_moment(t, pf.s_n, p);
  pf.e_xstar_p = p_moment(t, pf.x_star, p);
  pf.e_abs_p = p_moment(t, pf.terminal, p);
  return pf;
}

double bdg_ratio(const AdaptedProcess& proc, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("bdg_ratio requires p > 1");
  const PathFunctionals pf = compute_path_functionals(proc, p);
  if (!(pf.e_xstar_p > 1e-300))
    throw DegenerateProcessError("identically zero process: the ratio is undefined");
  return pf.e_sp / pf.e_xstar_p;
}

}  // namespace bdg
