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

#include <cstdint>
#include <vector>

#include "electree/grule.hpp"
#include "electree/tree.hpp"

namespace electree {

/// Summary of one rooted subtree under a rank rule: theta is the total count
/// of the subtree (the root's own count plus the accumulated counts of its
/// descendants), size its node count, pls the sum over nodes of their depth
/// within the subtree measured in descendant counts (the path-length sum).
struct SubtreeSummary {
  std::int64_t theta = 0;
  std::int64_t size = 0;
  std::int64_t pls = 0;
};

/// Summaries of T[u, toward-v-removed] for every ordered pair of adjacent
/// nodes, indexed by half-edge: entry h for the half-edge u -> v holds the
/// summary of the component of T - {u,v} edge that contains u, rooted at u.
/// Built in two passes, O(n) total.
class DirectedEdgeTable {
 public:
  DirectedEdgeTable(const Tree& tree, const GRule& rule) : tree_(&tree) {
    const NodeId n = tree.size();
    table_.resize(static_cast<std::size_t>(tree.half_edge_count()));
    if (n == 1) return;

    // Iterative post-order from node 0: parent_half[u] is the half-edge
    // u -> parent(u), which is exactly the slot the downward pass fills.
    std::vector<std::int32_t> parent_half(static_cast<std::size_t>(n), -1);
    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<NodeId> stack{0};
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    visited[0] = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      order.push_back(u);
      const std::int32_t begin = tree.half_edge_begin(u);
      for (std::int32_t h = begin; h < begin + tree.degree(u); ++h) {
        const NodeId v = tree.half_edge_target(h);
        if (!visited[static_cast<std::size_t>(v)]) {
          visited[static_cast<std::size_t>(v)] = 1;
          parent_half[static_cast<std::size_t>(v)] = tree.half_edge_mirror(h);
          stack.push_back(v);
        }
      }
    }

    // Pass 1 (leaves up): fill each child -> parent slot.
    std::vector<ChildAggregate> agg(static_cast<std::size_t>(n));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId u = *it;
      const std::int32_t ph = parent_half[static_cast<std::size_t>(u)];
      if (ph < 0) continue;
      table_[static_cast<std::size_t>(ph)] =
          close(tree, u, agg[static_cast<std::size_t>(u)], rule);
      const auto& s = table_[static_cast<std::size_t>(ph)];
      const NodeId p = tree.half_edge_target(ph);
      agg[static_cast<std::size_t>(p)].add(s.theta, s.size, s.pls);
    }

    // Pass 2 (root down): at u, agg[u] now holds all n-1 directions' worth of
    // children except the parent side, which arrives here; each child slot
    // parent -> child is agg minus that child plus the parent-side summary.
    for (const NodeId u : order) {
      const std::int32_t ph = parent_half[static_cast<std::size_t>(u)];
      if (ph >= 0) {
        const auto& up = table_[static_cast<std::size_t>(tree.half_edge_mirror(ph))];
        agg[static_cast<std::size_t>(u)].add(up.theta, up.size, up.pls);
      }
      ChildAggregate& a = agg[static_cast<std::size_t>(u)];
      const std::int32_t begin = tree.half_edge_begin(u);
      for (std::int32_t h = begin; h < begin + tree.degree(u); ++h) {
        if (h == ph) continue;
        const auto& s = table_[static_cast<std::size_t>(tree.half_edge_mirror(h))];
        a.remove(s.theta, s.size, s.pls);
        table_[static_cast<std::size_t>(h)] = close(tree, u, a, rule);
        a.add(s.theta, s.size, s.pls);
      }
    }
  }

  /// Summary of the component containing u after removing edge {u, v},
  /// rooted at u.
  const SubtreeSummary& at(NodeId u, NodeId v) const {
    return table_[static_cast<std::size_t>(tree_->find_half_edge(u, v))];
  }
  const SubtreeSummary& at_half_edge(std::int32_t h) const {
    return table_[static_cast<std::size_t>(h)];
  }

  const Tree& tree() const { return *tree_; }

 private:
  // Rule contexts always carry the node's facts in the full tree; a node keeps
  // its original degree even when evaluated inside a directed component.
  static SubtreeSummary close(const Tree& tree, NodeId u, const ChildAggregate& agg,
                              const GRule& rule) {
    SubtreeSummary s;
    s.size = 1 + agg.size_sum;
    s.pls = agg.pls_sum + agg.size_sum;
    const std::int64_t g = rule({u, tree.weight(u), tree.degree(u)}, agg);
    s.theta = g + agg.theta_sum;
    return s;
  }

  const Tree* tree_;
  std::vector<SubtreeSummary> table_;
};

/// Summary of the whole tree rooted at `root`, assembled from the directed
/// table's child slots.
inline SubtreeSummary rooted_summary(const Tree& tree, const DirectedEdgeTable& table,
                                     const GRule& rule, NodeId root) {
  ChildAggregate agg;
  const std::int32_t begin = tree.half_edge_begin(root);
  for (std::int32_t h = begin; h < begin + tree.degree(root); ++h) {
    const auto& s = table.at_half_edge(tree.half_edge_mirror(h));
    agg.add(s.theta, s.size, s.pls);
  }
  SubtreeSummary s;
  s.size = 1 + agg.size_sum;
  s.pls = agg.pls_sum + agg.size_sum;
  s.theta = rule({root, tree.weight(root), tree.degree(root)}, agg) + agg.theta_sum;
  return s;
}

}  // namespace electree
