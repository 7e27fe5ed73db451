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
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "electree/error.hpp"
#include "electree/rng.hpp"

namespace electree {

using NodeId = std::int32_t;

/// An undirected tree on nodes 0..n-1 with per-node positive weights,
/// stored as a CSR adjacency list. Immutable once built; every builder
/// validates that the edge set is exactly a spanning tree.
///
/// Each adjacency slot is a half-edge. mirror(h) is the index of the same
/// edge seen from the other endpoint, so per-direction tables can be stored
/// flat over half-edge indices.
class Tree {
 public:
  /// Builds from an explicit edge list. Throws Error on self-loops,
  /// duplicate edges, out-of-range endpoints, non-positive weights, cycles,
  /// and disconnected inputs, each with its own code.
  static Tree from_edges(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                         std::vector<double> weights = {}) {
    if (n <= 0) throw Error(ErrorCode::bad_node, "tree must have at least one node");
    if (weights.empty()) weights.assign(static_cast<std::size_t>(n), 1.0);
    if (std::ssize(weights) != n)
      throw Error(ErrorCode::bad_node, "weight list does not match node count");
    for (NodeId v = 0; v < n; ++v) {
      if (!(weights[static_cast<std::size_t>(v)] > 0.0))
        throw Error(ErrorCode::negative_weight,
                    "node " + std::to_string(v) + " has non-positive weight");
    }
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw Error(ErrorCode::bad_node, "edge endpoint out of range");
      if (u == v) throw Error(ErrorCode::self_loop, "self-loop at node " + std::to_string(u));
    }
    {
      std::vector<std::pair<NodeId, NodeId>> canon(edges.size());
      std::transform(edges.begin(), edges.end(), canon.begin(), [](auto e) {
        return std::make_pair(std::min(e.first, e.second), std::max(e.first, e.second));
      });
      std::sort(canon.begin(), canon.end());
      if (std::adjacent_find(canon.begin(), canon.end()) != canon.end())
        throw Error(ErrorCode::duplicate_edge, "duplicate edge in input");
    }
    if (std::ssize(edges) != n - 1)
      throw Error(std::ssize(edges) > n - 1 ? ErrorCode::cycle : ErrorCode::disconnected,
                  "a tree on " + std::to_string(n) + " nodes needs exactly " +
                      std::to_string(n - 1) + " edges, got " + std::to_string(edges.size()));

    Tree t;
    t.weights_ = std::move(weights);
    t.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (auto [u, v] : edges) {
      ++t.offsets_[static_cast<std::size_t>(u) + 1];
      ++t.offsets_[static_cast<std::size_t>(v) + 1];
    }
    std::partial_sum(t.offsets_.begin(), t.offsets_.end(), t.offsets_.begin());
    t.targets_.resize(2 * edges.size());
    t.mirror_.resize(2 * edges.size());
    std::vector<std::int32_t> cursor(t.offsets_.begin(), t.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      const std::int32_t hu = cursor[static_cast<std::size_t>(u)]++;
      const std::int32_t hv = cursor[static_cast<std::size_t>(v)]++;
      t.targets_[static_cast<std::size_t>(hu)] = v;
      t.targets_[static_cast<std::size_t>(hv)] = u;
      t.mirror_[static_cast<std::size_t>(hu)] = hv;
      t.mirror_[static_cast<std::size_t>(hv)] = hu;
    }

    // Edge count is already n-1 and duplicates are rejected, so acyclicity
    // and connectivity coincide; check connectivity by one traversal.
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    NodeId reached = 1;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : t.neighbors(u)) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    if (reached != n) throw Error(ErrorCode::disconnected, "edge set is not connected");
    return t;
  }

  NodeId size() const { return static_cast<NodeId>(weights_.size()); }
  NodeId degree(NodeId u) const {
    return static_cast<NodeId>(offsets_[static_cast<std::size_t>(u) + 1] -
                               offsets_[static_cast<std::size_t>(u)]);
  }
  double weight(NodeId u) const { return weights_[static_cast<std::size_t>(u)]; }
  double total_weight() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

  std::span<const NodeId> neighbors(NodeId u) const {
    return std::span<const NodeId>(targets_)
        .subspan(static_cast<std::size_t>(offsets_[static_cast<std::size_t>(u)]),
                 static_cast<std::size_t>(degree(u)));
  }

  /// Half-edge range [h, h+degree(u)) for node u; targets(h) gives the head.
  std::int32_t half_edge_begin(NodeId u) const { return offsets_[static_cast<std::size_t>(u)]; }
  NodeId half_edge_target(std::int32_t h) const { return targets_[static_cast<std::size_t>(h)]; }
  std::int32_t half_edge_mirror(std::int32_t h) const { return mirror_[static_cast<std::size_t>(h)]; }
  std::int32_t half_edge_count() const { return static_cast<std::int32_t>(targets_.size()); }

  /// Half-edge u -> v; throws if v is not adjacent to u.
  std::int32_t find_half_edge(NodeId u, NodeId v) const {
    const std::int32_t begin = half_edge_begin(u);
    for (std::int32_t h = begin; h < begin + degree(u); ++h)
      if (targets_[static_cast<std::size_t>(h)] == v) return h;
    throw Error(ErrorCode::bad_node, "nodes " + std::to_string(u) + " and " +
                                         std::to_string(v) + " are not adjacent");
  }

  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(targets_.size() / 2);
    for (NodeId u = 0; u < size(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

 private:
  Tree() = default;

  std::vector<double> weights_;
  std::vector<std::int32_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<std::int32_t> mirror_;
};

// --- generators --------------------------------------------------------------

inline Tree make_path(NodeId n) {
  if (n < 1) throw Error(ErrorCode::size_bound, "path needs n >= 1");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Tree::from_edges(n, edges);
}

/// Star with center 0 and n-1 leaves.
inline Tree make_star(NodeId n) {
  if (n < 2) throw Error(ErrorCode::size_bound, "star needs n >= 2");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 1; i < n; ++i) edges.emplace_back(0, i);
  return Tree::from_edges(n, edges);
}

/// Two adjacent centers 0 and 1 with a and b pendant leaves respectively;
/// a + b + 2 nodes in total.
inline Tree make_double_star(NodeId a, NodeId b) {
  if (a < 1 || b < 1) throw Error(ErrorCode::size_bound, "double star needs a, b >= 1");
  std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}};
  NodeId next = 2;
  for (NodeId i = 0; i < a; ++i) edges.emplace_back(0, next++);
  for (NodeId i = 0; i < b; ++i) edges.emplace_back(1, next++);
  return Tree::from_edges(next, edges);
}

/// Caterpillar: spine 0..k-1, with counts[i] legs hanging off spine node i.
inline Tree make_caterpillar(const std::vector<NodeId>& counts) {
  const NodeId k = static_cast<NodeId>(counts.size());
  if (k < 1) throw Error(ErrorCode::size_bound, "caterpillar needs a non-empty spine");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i + 1 < k; ++i) edges.emplace_back(i, i + 1);
  NodeId next = k;
  for (NodeId i = 0; i < k; ++i) {
    if (counts[static_cast<std::size_t>(i)] < 0)
      throw Error(ErrorCode::size_bound, "leg counts must be >= 0");
    for (NodeId j = 0; j < counts[static_cast<std::size_t>(i)]; ++j) edges.emplace_back(i, next++);
  }
  return Tree::from_edges(next, edges);
}

/// Uniform random labelled tree on n nodes via Pruefer sequence decoding.
inline Tree make_random_tree(NodeId n, RngStream& rng) {
  if (n <= 0) throw Error(ErrorCode::size_bound, "random tree needs n >= 1");
  if (n == 1) return Tree::from_edges(1, {});
  if (n == 2) return Tree::from_edges(2, {{0, 1}});

  std::vector<NodeId> seq(static_cast<std::size_t>(n) - 2);
  for (auto& s : seq) s = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));

  std::vector<NodeId> remaining_degree(static_cast<std::size_t>(n), 1);
  for (NodeId s : seq) ++remaining_degree[static_cast<std::size_t>(s)];

  // Linear decode: "ptr" scans for leaves in increasing order while "leaf"
  // tracks the current smallest available leaf.
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(n) - 1);
  NodeId ptr = 0;
  while (remaining_degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
  NodeId leaf = ptr;
  for (NodeId s : seq) {
    edges.emplace_back(leaf, s);
    if (--remaining_degree[static_cast<std::size_t>(s)] == 1 && s < ptr) {
      leaf = s;
    } else {
      ++ptr;
      while (remaining_degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(leaf, static_cast<NodeId>(n - 1));
  return Tree::from_edges(n, edges);
}

}  // namespace electree
