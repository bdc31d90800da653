#include <doctest.h>

#include <cmath>

#include "bdg/checks.hpp"

using namespace bdg;

TEST_CASE("moment identity") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  const CheckReport r = check_moment_identity(w, 3.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(4.0));
  CHECK(r.rhs == doctest::Approx(4.0));

  // p = 2 reduces to the second-moment identity
  const CheckReport r2 = check_moment_identity(w, 2.0);
  CHECK(r2.pass);
  CHECK(r2.lhs == doctest::Approx(2.0));

  AdaptedProcess zero = w;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK(check_moment_identity(zero, 2.5).pass);

  AdaptedProcess bent = w;
  bent.values[1] += 0.5;
  const CheckReport na = check_moment_identity(bent, 2.5);
  CHECK(na.status == CheckStatus::Inapplicable);
}

TEST_CASE("orthogonality of increments") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  CHECK(check_orthogonality(w, w).lhs == doctest::Approx(0.0).epsilon(1e-14));

  const AdaptedProcess z = dual_closure(w, 3.0);
  const CheckReport r = check_orthogonality(w, z);
  CHECK(r.pass);
  CHECK(r.lhs <= 1e-14);

  AdaptedProcess c = w;
  std::fill(c.values.begin(), c.values.end(), 4.0);
  c.values[0] = 4.0;
  CHECK(check_orthogonality(w, c).lhs == 0.0);

  const AdaptedProcess other = gen_symmetric_walk(3);
  CHECK_THROWS_AS(check_orthogonality(w, other), std::invalid_argument);
}

TEST_CASE("pairing bound") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  const AdaptedProcess z = dual_closure(w, 3.0);
  const CheckReport r = check_pairing(w, z, 3.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(r.rhs == doctest::Approx(4.0).epsilon(1e-9));  // equality case

  AdaptedProcess zero = w;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  const CheckReport rz = check_pairing(w, zero, 3.0);
  CHECK(rz.pass);

  // p = 2 dual closure is the process itself: Cauchy-Schwarz with equality
  const CheckReport cs = check_pairing(w, dual_closure(w, 2.0), 2.0);
  CHECK(cs.pass);
  CHECK(cs.lhs == doctest::Approx(2.0));
}

TEST_CASE("maximal function sandwich") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  const CheckReport r = check_doob(w, 2.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(2.5));  // E (X*)^2
  CHECK(r.rhs == doctest::Approx(8.0));  // 4 * E X^2

  CHECK(check_doob(gen_symmetric_walk(1), 3.3).pass);
}

TEST_CASE("two-sided envelope check") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  const CheckReport r = check_bdg(w, 2.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(2.0));  // E S^2
  CHECK(r.rhs == doctest::Approx(2.5));  // C_2^2 E (X*)^2

  for (double p : {1.2, 1.7, 2.0, 2.8, 4.0})
    CHECK(check_bdg(gen_symmetric_walk(1), p).pass);

  AdaptedProcess zero = w;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK(check_bdg(zero, 2.0).status == CheckStatus::DegeneratePass);
}

TEST_CASE("large-p upper bound") {
  const AdaptedProcess w = gen_symmetric_walk(2);
  const CheckReport r = check_garsia_bound(w, 3.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(r.rhs == doctest::Approx(std::pow(6.0, 1.5) * 4.5));
  CHECK(check_garsia_bound(gen_symmetric_walk(1), 2.5).pass);
  CHECK_THROWS_AS(check_garsia_bound(w, 2.0), std::invalid_argument);
}

TEST_CASE("intermediate lower bounds") {
  const AdaptedProcess w = gen_symmetric_walk(2);

  const CheckReport big = check_lower_pbig(w, 3.0);
  CHECK(big.pass);
  CHECK(big.lhs ==
        doctest::Approx(std::pow(3.0, -1.5) * std::pow(1.5, -4.5) * 4.5));
  CHECK(big.rhs == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(check_lower_pbig(w, 1.5), std::invalid_argument);

  const CheckReport small = check_lower_psmall(w, 1.5);
  CHECK(small.pass);
  CHECK_THROWS_AS(check_lower_psmall(w, 3.0), std::invalid_argument);

  AdaptedProcess zero = w;
  std::fill(zero.values.begin(), zero.values.end(), 0.0);
  CHECK(check_lower_psmall(zero, 1.5).status == CheckStatus::DegeneratePass);
  CHECK(check_lower_pbig(zero, 3.0).status == CheckStatus::DegeneratePass);
}

TEST_CASE("dual closure moments") {
  for (double p : {1.2, 1.5, 1.8, 2.5}) {
    const AdaptedProcess m = gen_random_martingale(4, 3, 77);
    const AdaptedProcess z = dual_closure(m, p);
    CHECK(validate_martingale(z).pass);
    const double q = p / (p - 1.0);
    std::vector<double> xt, zt;
    for (int leaf : m.tree->leaves()) xt.push_back(m.values[leaf]);
    for (int leaf : z.tree->leaves()) zt.push_back(z.values[leaf]);
    const double ep = p_moment(*m.tree, xt, p);
    CHECK(p_moment(*z.tree, zt, q) ==
          doctest::Approx(ep).epsilon(1e-10).scale(1.0 + ep));
  }
}

TEST_CASE("full suite") {
  const SuiteReport s1 = run_suite(gen_symmetric_walk(4), 3.0);
  CHECK(s1.overall_pass);
  for (const auto& c : s1.checks)
    if (c.status == CheckStatus::Pass && c.check_id != "martingale-property" &&
        c.check_id != "orthogonality")
      CHECK(c.margin >= -c.tolerance);

  const SuiteReport s2 = run_suite(gen_random_martingale(5, 3, 7), 1.5);
  CHECK(s2.overall_pass);

  // non-martingale: validity fails, moment identity flagged inapplicable
  AdaptedProcess bent = gen_symmetric_walk(3);
  bent.values[2] += 0.3;
  const SuiteReport s3 = run_suite(bent, 2.5);
  CHECK(!s3.overall_pass);
  bool saw_invalid = false, saw_inapplicable = false;
  for (const auto& c : s3.checks) {
    if (c.check_id == "martingale-property" && !c.pass) saw_invalid = true;
    if (c.check_id == "moment-identity" &&
        c.status == CheckStatus::Inapplicable)
      saw_inapplicable = true;
  }
  CHECK(saw_invalid);
  CHECK(saw_inapplicable);

  // determinism: identical input yields identical reports
  const SuiteReport a = run_suite(gen_random_martingale(4, 2, 3), 2.5);
  const SuiteReport b = run_suite(gen_random_martingale(4, 2, 3), 2.5);
  CHECK(a.fingerprint == b.fingerprint);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].check_id == b.checks[i].check_id);
    CHECK(a.checks[i].lhs == b.checks[i].lhs);
    CHECK(a.checks[i].rhs == b.checks[i].rhs);
  }

  // exponent-range awareness
  const SuiteReport low = run_suite(gen_symmetric_walk(3), 1.5);
  for (const auto& c : low.checks)
    if (c.check_id == "garsia-upper" || c.check_id == "intermediate-lower-large-p")
      CHECK(c.status == CheckStatus::Skipped);
}
