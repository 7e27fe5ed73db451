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

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "electree/distributions.hpp"
#include "electree/error.hpp"
#include "electree/prob_table.hpp"
#include "electree/reroot.hpp"
#include "electree/tree.hpp"

namespace electree {

/// P(the directed elimination summarized by `mine` finishes strictly before
/// the one summarized by `other`), for the edge's two opposing directions.
using DurationCmp =
    std::function<double(const SubtreeSummary& mine, const SubtreeSummary& other)>;

/// General reduction of election probabilities to pairwise comparisons of
/// directed elimination durations: for each node u with neighbors u_1..u_k,
///
///   q_u = 1 - sum_i P(T[u, \u_i] side finishes before T[u_i, \u] side).
///
/// Works for any comparison satisfying cmp(e, e') + cmp(e', e) = 1 on every
/// edge (checked to 1e-9; violations raise inconsistent_model). The sum over
/// nodes then telescopes to 1 edge by edge.
inline ProbTable q_general(const DirectedEdgeTable& table, const DurationCmp& cmp,
                           Provenance provenance) {
  const Tree& tree = table.tree();
  const NodeId n = tree.size();
  ProbTable out;
  out.provenance = provenance;
  out.q.resize(static_cast<std::size_t>(n));
  out.half_width.assign(static_cast<std::size_t>(n), 0.0);

  for (NodeId u = 0; u < n; ++u) {
    double eliminated = 0.0;
    const std::int32_t begin = tree.half_edge_begin(u);
    for (std::int32_t h = begin; h < begin + tree.degree(u); ++h) {
      const SubtreeSummary& mine = table.at_half_edge(h);
      const SubtreeSummary& other = table.at_half_edge(tree.half_edge_mirror(h));
      const double p = cmp(mine, other);
      const double p_rev = cmp(other, mine);
      if (std::abs(p + p_rev - 1.0) > 1e-9)
        throw Error(ErrorCode::inconsistent_model,
                    "duration comparison is not complementary on edge {" +
                        std::to_string(u) + "," +
                        std::to_string(tree.half_edge_target(h)) + "}: " +
                        std::to_string(p) + " + " + std::to_string(p_rev));
      eliminated += p;
    }
    out.q[static_cast<std::size_t>(u)] = std::clamp(1.0 - eliminated, 0.0, 1.0);
  }
  return out;
}

/// First-category election probabilities for an arbitrary integer rank rule:
/// the duration of a directed side with count total theta is distributed as
/// the maximum of theta unit-rate exponentials, so the comparison reduces to
/// theta ratios.
inline ProbTable q_first_category(const Tree& tree, const GRule& rule) {
  const DirectedEdgeTable table(tree, rule);
  return q_general(
      table,
      [](const SubtreeSummary& mine, const SubtreeSummary& other) {
        return prob_max_exp_first(mine.theta, other.theta);
      },
      Provenance::exact_first_category);
}

/// Stable-1/2 scheme probabilities: a directed side of size s takes s^2 X
/// in distribution, so the comparison is (2/pi) arctan of the size ratio.
inline ProbTable q_stable(const Tree& tree) {
  const DirectedEdgeTable table(tree, GRule::unit());
  return q_general(
      table,
      [](const SubtreeSummary& mine, const SubtreeSummary& other) {
        return prob_stable_sum_first(mine.size, other.size);
      },
      Provenance::exact_stable);
}

// --- arctangent identities ---------------------------------------------------

/// Numeric check of one closed-form identity; abs_error is |lhs - rhs|.
struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;

  static IdentityReport of(double lhs, double rhs) {
    return {lhs, rhs, std::abs(lhs - rhs)};
  }
};

/// arctan(x) + arctan(1/x) = pi/2 for x > 0.
inline IdentityReport check_identity_reciprocal(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::bad_parameter, "reciprocal identity needs x > 0");
  return IdentityReport::of(std::atan(x) + std::atan(1.0 / x), kPi / 2.0);
}

/// Star form: arctan(n-1) + arctan(1/(n-1)) = pi/2, the statement that a
/// star's leaf and center elimination terms are complementary.
inline IdentityReport check_identity_star(std::int64_t n) {
  if (n < 2) throw Error(ErrorCode::bad_parameter, "star identity needs n >= 2");
  const double m = static_cast<double>(n - 1);
  return IdentityReport::of(std::atan(m) + std::atan(1.0 / m), kPi / 2.0);
}

/// Caterpillar sum rule over spine prefix/suffix ratios:
///
///   sum_i [ arctan(suffix_after(i)/prefix_through(i))
///         + arctan(prefix_before(i)/suffix_from(i)) ] = (pi/2)(k - 1)
///
/// for any positive alphas; empty partial sums contribute arctan(0) = 0.
inline IdentityReport check_identity_caterpillar(const std::vector<double>& alphas) {
  const std::size_t k = alphas.size();
  if (k == 0) throw Error(ErrorCode::bad_parameter, "caterpillar identity needs k >= 1");
  for (double a : alphas)
    if (!(a > 0.0) || !std::isfinite(a))
      throw Error(ErrorCode::bad_parameter, "caterpillar identity needs positive alphas");

  const double total = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  double lhs = 0.0;
  double prefix_through = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double prefix_before = prefix_through;
    prefix_through += alphas[i];
    const double suffix_after = total - prefix_through;
    const double suffix_from = total - prefix_before;
    lhs += std::atan(suffix_after / prefix_through) + std::atan(prefix_before / suffix_from);
  }
  return IdentityReport::of(lhs, kPi / 2.0 * static_cast<double>(k - 1));
}

}  // namespace electree
