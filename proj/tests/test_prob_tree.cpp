#include <doctest.h>

#include <cmath>

#include "bdg/path_functionals.hpp"
#include "bdg/prob_tree.hpp"

using namespace bdg;

namespace {

std::vector<double> leaf_values(const AdaptedProcess& proc) {
  std::vector<double> out;
  for (int leaf : proc.tree->leaves()) out.push_back(proc.values[leaf]);
  return out;
}

}  // namespace

TEST_CASE("symmetric walk") {
  const AdaptedProcess w1 = gen_symmetric_walk(1);
  CHECK(w1.values[0] == 0.0);
  CHECK(leaf_values(w1) == std::vector<double>{1.0, -1.0});

  const AdaptedProcess w2 = gen_symmetric_walk(2);
  CHECK(leaf_values(w2) == std::vector<double>{2.0, 0.0, 0.0, -2.0});
  CHECK(validate_martingale(w2).pass);
  CHECK(validate_martingale(gen_symmetric_walk(7)).pass);
  CHECK_THROWS_AS(gen_symmetric_walk(25), std::invalid_argument);
  CHECK_THROWS_AS(gen_symmetric_walk(0), std::invalid_argument);
}

TEST_CASE("martingale validation catches perturbations") {
  AdaptedProcess w = gen_symmetric_walk(2);
  w.values[3] += 0.1;  // a grandchild
  const CheckReport r = validate_martingale(w);
  CHECK(!r.pass);
  CHECK(r.lhs > 0.01);

  AdaptedProcess broken = gen_symmetric_walk(2);
  broken.values.pop_back();
  CHECK_THROWS_AS(validate_martingale(broken), std::invalid_argument);
}

TEST_CASE("conditional expectation") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  const std::vector<double> lv = leaf_values(w);

  // identity at the terminal level, plain mean at the root
  CHECK(conditional_expectation(*w.tree, lv, 2) == lv);
  CHECK(conditional_expectation(*w.tree, lv, 0)[0] ==
        doctest::Approx(0.0).epsilon(1e-14));

  // Y = X_2 |X_2|: leaves (-4, 0, 0, 4) on the path order (++, +-, -+, --)
  std::vector<double> y;
  for (double v : lv) y.push_back(v * std::abs(v));
  const auto level1 = conditional_expectation(*w.tree, y, 1);
  CHECK(level1[0] == doctest::Approx(2.0));
  CHECK(level1[1] == doctest::Approx(-2.0));
  CHECK_THROWS_AS(conditional_expectation(*w.tree, y, 3), std::out_of_range);
}

TEST_CASE("martingale closure") {
  const AdaptedProcess w = gen_symmetric_walk(2);

  const AdaptedProcess c =
      close_martingale(w.tree, std::vector<double>(4, 3.25));
  for (double v : c.values) CHECK(v == 3.25);
  CHECK(validate_martingale(c).pass);

  // closing the terminal values of a martingale reproduces it
  const AdaptedProcess again = close_martingale(w.tree, leaf_values(w));
  for (int i = 0; i < w.tree->node_count(); ++i)
    CHECK(again.values[i] == doctest::Approx(w.values[i]).epsilon(1e-14));

  std::vector<double> y;
  for (double v : leaf_values(w)) y.push_back(v * std::abs(v));
  const AdaptedProcess z = close_martingale(w.tree, y);
  CHECK(z.values ==
        std::vector<double>{0.0, 2.0, -2.0, 4.0, 0.0, 0.0, -4.0});
  CHECK(validate_martingale(z).pass);
}

TEST_CASE("random martingales") {
  const AdaptedProcess a = gen_random_martingale(5, 3, 42);
  const AdaptedProcess b = gen_random_martingale(5, 3, 42);
  CHECK(a.values == b.values);
  CHECK(fingerprint(a) == fingerprint(b));
  CHECK(fingerprint(a) != fingerprint(gen_random_martingale(5, 3, 43)));

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const AdaptedProcess m = gen_random_martingale(4, 3, seed, 2.0);
    CHECK(validate_martingale(m).pass);
    double psum = 0.0;
    for (double lp : m.tree->leaf_probs()) psum += lp;
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
    // second-moment identity, exact for every martingale
    const PathFunctionals pf = compute_path_functionals(m, 2.0);
    CHECK(pf.e_sp ==
          doctest::Approx(pf.e_abs_p).epsilon(1e-10).scale(1.0 + pf.e_abs_p));
    // increments have zero total expectation at every level
    for (int j = 1; j <= m.tree->depth_n(); ++j) {
      std::vector<double> inc;
      for (int leaf : m.tree->leaves()) {
        int v = leaf;
        while (m.tree->node(v).depth > j) v = m.tree->node(v).parent;
        inc.push_back(m.values[v] - m.values[m.tree->node(v).parent]);
      }
      CHECK(std::abs(expectation(*m.tree, inc)) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(gen_random_martingale(30, 3, 1), std::invalid_argument);
}

TEST_CASE("martingale transform") {
  const AdaptedProcess w = gen_symmetric_walk(3);

  const std::vector<double> ones(w.tree->node_count(), 1.0);
  const AdaptedProcess same = gen_transform(w, ones, 1.0);
  CHECK(same.values == w.values);

  std::vector<double> neg(w.tree->node_count(), -1.0);
  const AdaptedProcess flip = gen_transform(w, neg, 1.0);
  for (int i = 0; i < w.tree->node_count(); ++i)
    CHECK(flip.values[i] == -w.values[i]);

  // predictable +-1 multipliers keep the square function, not the maximum
  std::vector<double> alt(w.tree->node_count(), 1.0);
  for (int i = 0; i < w.tree->node_count(); ++i)
    if (w.tree->node(i).depth == 2) alt[i] = -1.0;
  const AdaptedProcess t = gen_transform(w, alt, 1.0);
  CHECK(validate_martingale(t).pass);
  CHECK(square_function(t) == square_function(w));

  std::vector<double> ragged(w.tree->node_count(), 1.0);
  ragged[1] = -1.0;  // differs from its sibling
  CHECK_THROWS_AS(gen_transform(w, ragged, 1.0), std::invalid_argument);
  std::vector<double> big(w.tree->node_count(), 2.0);
  CHECK_THROWS_AS(gen_transform(w, big, 1.0), std::invalid_argument);
}

TEST_CASE("expectation by enumeration") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  CHECK(expectation(*w.tree, {1.0, 1.0, 1.0, 1.0}) == doctest::Approx(1.0));
  std::vector<double> cube;
  for (int leaf : w.tree->leaves())
    cube.push_back(std::pow(std::abs(w.values[leaf]), 3.0));
  CHECK(expectation(*w.tree, cube) == doctest::Approx(4.0));
  CHECK(expectation(*w.tree, {1.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.25));
}

TEST_CASE("tower property") {
  const AdaptedProcess m = gen_random_martingale(4, 3, 9);
  const OutcomeTree& t = *m.tree;
  std::vector<double> y;
  for (int leaf : t.leaves()) y.push_back(m.values[leaf] * m.values[leaf]);

  // condition at level 3, re-aggregate as a closure, then condition at 1
  const AdaptedProcess closed = close_martingale(m.tree, y);
  const auto direct = conditional_expectation(t, y, 1);
  const auto& level1 = t.level(1);
  for (std::size_t i = 0; i < level1.size(); ++i)
    CHECK(closed.values[level1[i]] ==
          doctest::Approx(direct[i]).epsilon(1e-12).scale(
              1.0 + std::abs(direct[i])));
}

TEST_CASE("scaling a process scales its moments") {
  const AdaptedProcess m = gen_random_martingale(3, 2, 5);
  const double p = 2.6;
  const PathFunctionals base = compute_path_functionals(m, p);
  for (double lam : {-2.0, 3.0}) {
    AdaptedProcess s = m;
    for (double& v : s.values) v *= lam;
    const PathFunctionals sc = compute_path_functionals(s, p);
    const double f = std::pow(std::abs(lam), p);
    CHECK(sc.e_abs_p == doctest::Approx(f * base.e_abs_p).epsilon(1e-12));
    CHECK(sc.e_sp == doctest::Approx(f * base.e_sp).epsilon(1e-12));
    CHECK(sc.e_xstar_p == doctest::Approx(f * base.e_xstar_p).epsilon(1e-12));
  }
}

TEST_CASE("tree structure validation") {
  // ragged: one branch of depth 1, one of depth 2
  std::vector<TreeNode> nodes(4);
  nodes[0].children = {1, 2};
  nodes[1] = {0, 1, 0.5, {}};
  nodes[2] = {0, 1, 0.5, {3}};
  nodes[3] = {2, 2, 1.0, {}};
  CHECK_THROWS_AS(OutcomeTree::build(nodes), std::invalid_argument);

  // bad probability sum
  std::vector<TreeNode> bad(3);
  bad[0].children = {1, 2};
  bad[1] = {0, 1, 0.6, {}};
  bad[2] = {0, 1, 0.6, {}};
  CHECK_THROWS_AS(OutcomeTree::build(bad), std::invalid_argument);
}
