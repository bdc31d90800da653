#include <doctest.h>

#include <cmath>

#include "bdg/path_functionals.hpp"
#include "bdg/prob_tree.hpp"
#include "bdg/scalar_kernels.hpp"

using namespace bdg;

TEST_CASE("square function") {
  const AdaptedProcess w = gen_symmetric_walk(5);
  for (double s : square_function(w))
    CHECK(s == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));

  AdaptedProcess flat = w;
  std::fill(flat.values.begin(), flat.values.end(), 0.0);
  for (double s : square_function(flat)) CHECK(s == 0.0);

  // single path 0 -> 1 -> 3 embedded in a hand-built chain of pair nodes
  AdaptedProcess two = gen_symmetric_walk(2);
  two.values = {0.0, 1.0, -1.0, 3.0, -1.0, 1.0, -3.0};
  CHECK(square_function(two)[0] == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("maximal function") {
  AdaptedProcess w = gen_symmetric_walk(2);
  // paths in leaf order: (+1,+2), (+1,0), (-1,0), (-1,-2)
  CHECK(maximal_function(w) == std::vector<double>{2.0, 1.0, 1.0, 2.0});

  // maximum attained before the terminal time
  AdaptedProcess drop = w;
  drop.values = {0.0, 3.0, -3.0, 1.0, 5.0, -5.0, -1.0};
  const auto xs = maximal_function(drop);
  CHECK(xs[0] == 3.0);
  CHECK(xs[1] == 5.0);
}

TEST_CASE("p moments") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  std::vector<double> terminal;
  for (int leaf : w.tree->leaves()) terminal.push_back(w.values[leaf]);
  CHECK(p_moment(*w.tree, terminal, 3.0) == doctest::Approx(4.0));
  CHECK(p_moment(*w.tree, maximal_function(w), 2.0) == doctest::Approx(2.5));
  CHECK(p_moment(*w.tree, {0.0, 0.0, 0.0, 0.0}, 1.7) == 0.0);
}

TEST_CASE("square to maximal ratio") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  CHECK(bdg_ratio(w, 2.0) == doctest::Approx(0.8));

  AdaptedProcess scaled = w;
  for (double& v : scaled.values) v *= -7.5;
  CHECK(bdg_ratio(scaled, 2.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(bdg_ratio(scaled, 3.1) ==
        doctest::Approx(bdg_ratio(w, 3.1)).epsilon(1e-12));

  for (double p : {1.3, 2.0, 4.2})
    CHECK(bdg_ratio(gen_symmetric_walk(1), p) == doctest::Approx(1.0));

  AdaptedProcess zero = w;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK_THROWS_AS(bdg_ratio(zero, 2.0), DegenerateProcessError);
}

TEST_CASE("pathwise monotonicity along every path") {
  const AdaptedProcess m = gen_random_martingale(5, 2, 31);
  const OutcomeTree& t = *m.tree;
  for (int leaf : t.leaves()) {
    double prev_ss = -1.0, prev_max = -1.0;
    std::vector<int> path;
    for (int v = leaf; v != -1; v = t.node(v).parent) path.push_back(v);
    double ss = 0.0, mx = 0.0;
    for (auto it = path.rbegin() + 1; it != path.rend(); ++it) {
      const int v = *it;
      const double d = m.values[v] - m.values[t.node(v).parent];
      ss += d * d;
      mx = std::max(mx, std::abs(m.values[v]));
      CHECK(ss >= prev_ss);
      CHECK(mx >= prev_max);
      prev_ss = ss;
      prev_max = mx;
    }
  }
}

TEST_CASE("envelope and maximal-function sandwich on generated martingales") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const AdaptedProcess m = gen_random_martingale(4, 2, seed);
    for (double p : {1.4, 2.0, 3.0}) {
      const PExponent e = PExponent::make(p);
      const PathFunctionals pf = compute_path_functionals(m, p);
      const double slack = 1e-12 * std::max(1.0, pf.e_xstar_p);
      CHECK(pf.e_abs_p <= pf.e_xstar_p + slack);
      CHECK(pf.e_xstar_p <= e.doob * pf.e_abs_p + slack * e.doob);
      const double r = bdg_ratio(m, p);
      CHECK(std::pow(e.c_p, p) <= r + 1e-12);
      CHECK(r <= std::pow(e.C_p, p) + 1e-12);
    }
  }
}
