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

// Walkthrough of the library on one small tree: exact probabilities under
// three schemes, a Monte Carlo cross-check, and a single traced election.

#include <cstdio>

#include "electree/electree.hpp"

int main() {
  using namespace electree;

  // Caterpillar: spine 0-1-2 with 2, 0, 1 legs.
  const Tree tree = make_caterpillar({2, 0, 1});

  const ProbTable uniform = q_first_category(tree, GRule::unit());
  const ProbTable by_degree = q_first_category(tree, GRule::degree());
  const ProbTable stable = q_stable(tree);
  const MonteCarloResult mc = monte_carlo(tree, FirstCategory{GRule::degree()}, 200000, 42);

  std::printf("node  uniform   degree    degree-MC  stable\n");
  for (NodeId u = 0; u < tree.size(); ++u) {
    std::printf("%4d  %.6f  %.6f  %.6f   %.6f\n", u, uniform.q[static_cast<std::size_t>(u)],
                by_degree.q[static_cast<std::size_t>(u)],
                mc.table.q[static_cast<std::size_t>(u)], stable.q[static_cast<std::size_t>(u)]);
  }
  std::printf("sums: %.12f %.12f (MC) %.12f\n", uniform.sum(), by_degree.sum(), stable.sum());

  std::printf("\none election, event by event:\n");
  RngStream rng(7, 0);
  run_election(tree, FirstCategory{GRule::unit()}, rng, [](const TraceEvent& ev) {
    std::printf("t=%-10.6f %-12s node %d", ev.t, ev.event, ev.node);
    if (ev.gamma) std::printf("  Gamma=%g", *ev.gamma);
    std::printf("\n");
  });
  return 0;
}
