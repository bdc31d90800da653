#include <doctest.h>

#include <cmath>

#include "bdg/io.hpp"

using namespace bdg;

TEST_CASE("martingale file round trip") {
  for (std::uint64_t seed : {1ull, 5ull, 9ull}) {
    const AdaptedProcess m = gen_random_martingale(4, 3, seed);
    const json once = serialize_martingale(m);
    const AdaptedProcess back = parse_martingale(once);
    CHECK(back.values == m.values);
    CHECK(fingerprint(back) == fingerprint(m));
    // serialize(parse(serialize(x))) is byte-identical
    CHECK(serialize_martingale(back).dump() == once.dump());
  }
}

TEST_CASE("martingale file validation") {
  const json good = serialize_martingale(gen_symmetric_walk(2));

  json ragged = good;
  ragged["tree"]["children"][0]["children"] = json::array();
  CHECK_THROWS_AS(parse_martingale(ragged), std::invalid_argument);

  json bad_prob = good;
  bad_prob["tree"]["children"][0]["branch_prob"] = "0.4";
  CHECK_THROWS_AS(parse_martingale(bad_prob), std::invalid_argument);

  // a 1e-9-level probability slop is repaired by renormalization
  json sloppy = good;
  sloppy["tree"]["children"][0]["branch_prob"] = "0.5000000001";
  const AdaptedProcess fixed = parse_martingale(sloppy);
  double sum = 0.0;
  for (int c : fixed.tree->node(0).children)
    sum += fixed.tree->node(c).branch_prob;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

  json bad_root = good;
  bad_root["tree"]["value"] = "0.25";
  CHECK_THROWS_AS(parse_martingale(bad_root), std::invalid_argument);

  json bad_number = good;
  bad_number["tree"]["children"][0]["value"] = "one";
  CHECK_THROWS_AS(parse_martingale(bad_number), std::invalid_argument);

  json bad_version = good;
  bad_version["version"] = 7;
  CHECK_THROWS_AS(parse_martingale(bad_version), std::invalid_argument);
}

TEST_CASE("decimal formatting survives doubles") {
  for (double x : {1.0, -0.1, 1.0 / 3.0, 2.5e-17, -3.7e300}) {
    const double back = std::stod(format_double(x));
    CHECK(back == x);
  }
}

TEST_CASE("generator family specs") {
  const AdaptedProcess w = make_family("walk:depth=3");
  CHECK(w.tree->depth_n() == 3);
  CHECK(w.values == gen_symmetric_walk(3).values);

  const AdaptedProcess r1 = make_family("random:depth=3,branch=3,seed=7");
  const AdaptedProcess r2 = make_family("random:depth=3,branch=3,seed=7");
  CHECK(r1.values == r2.values);
  CHECK(validate_martingale(r1).pass);

  const AdaptedProcess t = make_family("transform:depth=4,seed=3");
  CHECK(validate_martingale(t).pass);

  // defaults fill whatever the spec omits
  CHECK(make_family("walk", 5).tree->depth_n() == 5);

  CHECK_THROWS_AS(make_family("brownian:depth=3"), std::invalid_argument);
  CHECK_THROWS_AS(make_family("walk:depth"), std::invalid_argument);
}

TEST_CASE("report serialization") {
  const CheckReport c =
      identity_check("demo", "anchor-name", 1.0, 1.0 + 1e-12, 1e-9);
  const json j = to_json(c);
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("check_id") == "demo");
  CHECK(j.at("status") == "pass");
  CHECK(std::stod(j.at("tolerance").get<std::string>()) ==
        doctest::Approx(1e-9).epsilon(1e-9));
}
