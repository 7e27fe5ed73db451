// Copyright 2026 The electree authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "electree/exact.hpp"
#include "electree/rng.hpp"
#include "support/naive.hpp"

using namespace electree;
using test::random_tree_with_int_weights;
using test::with_weights;

TEST_CASE("non-complementary comparisons are rejected") {
  const Tree t = make_path(3);
  const DirectedEdgeTable table(t, GRule::unit());
  const DurationCmp broken = [](const SubtreeSummary&, const SubtreeSummary&) { return 0.4; };
  try {
    (void)q_general(table, broken, Provenance::exact_first_category);
    FAIL("expected inconsistent_model");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::inconsistent_model);
  }
}

TEST_CASE("a symmetric comparison splits two nodes evenly") {
  const Tree t = make_path(2);
  const DirectedEdgeTable table(t, GRule::unit());
  const DurationCmp coin = [](const SubtreeSummary&, const SubtreeSummary&) { return 0.5; };
  const ProbTable q = q_general(table, coin, Provenance::exact_first_category);
  REQUIRE(q.q == std::vector<double>{0.5, 0.5});
}

TEST_CASE("the general reduction reproduces the closed first-category form") {
  RngStream rng(21, 0);
  for (const auto& rule : {GRule::unit(), GRule::degree(), GRule::subtree_size()}) {
    const Tree t = make_random_tree(13, rng);
    const DirectedEdgeTable table(t, rule);
    const ProbTable via_general = q_general(
        table,
        [](const SubtreeSummary& mine, const SubtreeSummary& other) {
          return prob_max_exp_first(mine.theta, other.theta);
        },
        Provenance::exact_first_category);
    const ProbTable direct = q_first_category(t, rule);
    REQUIRE(via_general.q == direct.q);
  }
}

TEST_CASE("unit rule gives the uniform distribution") {
  RngStream rng(22, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const NodeId n = static_cast<NodeId>(2 + rng.next_below(11));
    const Tree t = make_random_tree(n, rng);
    const ProbTable q = q_first_category(t, GRule::unit());
    for (NodeId u = 0; u < n; ++u)
      REQUIRE(std::abs(q.q[static_cast<std::size_t>(u)] - 1.0 / n) <= 1e-12);
  }
}

TEST_CASE("weight rule gives weight-proportional probabilities") {
  RngStream rng(23, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const NodeId n = static_cast<NodeId>(2 + rng.next_below(11));
    const Tree t = random_tree_with_int_weights(n, rng, 9);
    const ProbTable q = q_first_category(t, GRule::weight());
    for (NodeId u = 0; u < n; ++u)
      REQUIRE(std::abs(q.q[static_cast<std::size_t>(u)] - t.weight(u) / t.total_weight()) <=
              1e-9);
  }
}

TEST_CASE("degree rule gives degree over twice the edge count") {
  RngStream rng(24, 0);
  const Tree t = make_random_tree(17, rng);
  const ProbTable q = q_first_category(t, GRule::degree());
  const double denom = 2.0 * (t.size() - 1);
  for (NodeId u = 0; u < t.size(); ++u)
    REQUIRE(std::abs(q.q[static_cast<std::size_t>(u)] - t.degree(u) / denom) <= 1e-12);
}

TEST_CASE("weight rule is scale invariant") {
  RngStream rng(25, 0);
  const Tree t = random_tree_with_int_weights(11, rng, 6);
  std::vector<double> tripled(static_cast<std::size_t>(t.size()));
  for (NodeId u = 0; u < t.size(); ++u)
    tripled[static_cast<std::size_t>(u)] = 3.0 * t.weight(u);
  const ProbTable base = q_first_category(t, GRule::weight());
  const ProbTable scaled = q_first_category(with_weights(t, tripled), GRule::weight());
  for (NodeId u = 0; u < t.size(); ++u)
    REQUIRE(std::abs(base.q[static_cast<std::size_t>(u)] -
                     scaled.q[static_cast<std::size_t>(u)]) <= 1e-12);
}

TEST_CASE("every positive rank rule sums to one") {
  RngStream rng(26, 0);
  const std::vector<GRule> rules = {
      GRule::subtree_size(),
      GRule::custom("fold-a", [](const GRuleContext& ctx, const ChildAggregate& a) {
        return 1 + (a.theta_sum + a.pls_sum + ctx.degree) % 5;
      }),
      GRule::custom("fold-b", [](const GRuleContext&, const ChildAggregate& a) {
        return 1 + (7 * a.size_sum) % 13;
      }),
  };
  for (int rep = 0; rep < 30; ++rep) {
    const NodeId n = static_cast<NodeId>(2 + rng.next_below(11));
    const Tree t = make_random_tree(n, rng);
    for (const auto& rule : rules) {
      const ProbTable q = q_first_category(t, rule);
      REQUIRE(std::abs(q.sum() - 1.0) <= 1e-9);
      for (double p : q.q) {
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0);
      }
    }
  }
}

TEST_CASE("stable scheme on two nodes") {
  const ProbTable q = q_stable(make_path(2));
  REQUIRE(std::abs(q.q[0] - 0.5) <= 1e-15);
  REQUIRE(std::abs(q.q[1] - 0.5) <= 1e-15);
}

TEST_CASE("stable scheme on stars matches the arctangent forms") {
  for (const NodeId n : {3, 4, 7, 12}) {
    const ProbTable q = q_stable(make_star(n));
    const double m = static_cast<double>(n - 1);
    const double center = 1.0 - m * kTwoOverPi * std::atan(1.0 / m);
    const double leaf = 1.0 - kTwoOverPi * std::atan(m);
    REQUIRE(std::abs(q.q[0] - center) <= 1e-12);
    for (NodeId u = 1; u < n; ++u)
      REQUIRE(std::abs(q.q[static_cast<std::size_t>(u)] - leaf) <= 1e-12);
    REQUIRE(std::abs(q.sum() - 1.0) <= 1e-9);
  }
}

TEST_CASE("stable scheme sums to one on random trees") {
  RngStream rng(27, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const Tree t = make_random_tree(static_cast<NodeId>(2 + rng.next_below(14)), rng);
    const ProbTable q = q_stable(t);
    REQUIRE(std::abs(q.sum() - 1.0) <= 1e-9);
  }
}

TEST_CASE("single-node distributions are the point mass") {
  const Tree t = make_path(1);
  REQUIRE(q_first_category(t, GRule::unit()).q == std::vector<double>{1.0});
  REQUIRE(q_stable(t).q == std::vector<double>{1.0});
}

TEST_CASE("reciprocal identity") {
  REQUIRE(check_identity_reciprocal(1.0).abs_error <= 1e-15);
  REQUIRE(check_identity_reciprocal(2.5).abs_error <= 1e-12);
  REQUIRE(check_identity_reciprocal(1e-6).abs_error <= 1e-12);
  REQUIRE_THROWS_AS(check_identity_reciprocal(0.0), Error);
  REQUIRE_THROWS_AS(check_identity_reciprocal(-2.0), Error);
}

TEST_CASE("star identity") {
  for (std::int64_t n = 2; n <= 20; ++n) REQUIRE(check_identity_star(n).abs_error <= 1e-12);
  REQUIRE_THROWS_AS(check_identity_star(1), Error);
}

TEST_CASE("caterpillar identity") {
  const IdentityReport flat = check_identity_caterpillar({1.0, 1.0, 1.0});
  REQUIRE(flat.rhs == Catch::Approx(kPi).epsilon(1e-15));
  REQUIRE(flat.abs_error <= 1e-12);
  REQUIRE(check_identity_caterpillar({2.0}).abs_error <= 1e-15);  // rhs is 0
  REQUIRE(check_identity_caterpillar({0.5, 3.0, 1.25, 0.125}).abs_error <= 1e-12);
  REQUIRE_THROWS_AS(check_identity_caterpillar({}), Error);
  REQUIRE_THROWS_AS(check_identity_caterpillar({1.0, -1.0}), Error);
  REQUIRE_THROWS_AS(check_identity_caterpillar({1.0, 0.0}), Error);
}
