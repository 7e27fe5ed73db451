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

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "electree/error.hpp"
#include "electree/tree.hpp"

namespace electree {

/// Per-node facts a rank rule may consult.
struct GRuleContext {
  NodeId node;
  double weight;
  NodeId degree;
};

/// Commutative aggregate over the already-processed children of a rooted
/// subtree. Components are plain sums, so any child's contribution can be
/// added or removed in O(1); this is what makes the all-directions pass
/// linear.
struct ChildAggregate {
  std::int64_t theta_sum = 0;
  std::int64_t size_sum = 0;
  std::int64_t pls_sum = 0;
  std::int64_t count = 0;

  ChildAggregate& add(std::int64_t theta, std::int64_t size, std::int64_t pls) {
    theta_sum += theta;
    size_sum += size;
    pls_sum += pls;
    ++count;
    return *this;
  }
  ChildAggregate& remove(std::int64_t theta, std::int64_t size, std::int64_t pls) {
    theta_sum -= theta;
    size_sum -= size;
    pls_sum -= pls;
    --count;
    return *this;
  }
};

/// Integer rank rule g: assigns each rooted subtree a positive count as a
/// function of the root's own facts and the aggregate of its children.
/// The built-in rules cover the closed-form families; `custom` accepts any
/// user function of the same shape.
class GRule {
 public:
  enum class Kind { unit, weight, degree, subtree_size, custom };

  using CustomFn =
      std::function<std::int64_t(const GRuleContext&, const ChildAggregate&)>;

  static GRule unit() { return GRule(Kind::unit, "unit"); }
  /// Requires every node weight to be a positive integer.
  static GRule weight() { return GRule(Kind::weight, "weight"); }
  static GRule degree() { return GRule(Kind::degree, "degree"); }
  static GRule subtree_size() { return GRule(Kind::subtree_size, "subtree-size"); }
  static GRule custom(std::string name, CustomFn fn) {
    GRule r(Kind::custom, std::move(name));
    r.fn_ = std::move(fn);
    return r;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  std::int64_t operator()(const GRuleContext& ctx, const ChildAggregate& agg) const {
    std::int64_t g = 0;
    switch (kind_) {
      case Kind::unit:
        g = 1;
        break;
      case Kind::weight: {
        const double w = ctx.weight;
        if (!(w > 0.0) || w != std::floor(w) || w > 9.0e15)
          throw Error(ErrorCode::scheme_error,
                      "weight rule needs positive integer node weights; node " +
                          std::to_string(ctx.node) + " has weight " + std::to_string(w));
        g = static_cast<std::int64_t>(w);
        break;
      }
      case Kind::degree:
        g = ctx.degree;
        break;
      case Kind::subtree_size:
        g = 1 + agg.size_sum;
        break;
      case Kind::custom:
        g = fn_(ctx, agg);
        break;
    }
    if (g < 1)
      throw Error(ErrorCode::scheme_error, "rank rule '" + name_ + "' produced " +
                                               std::to_string(g) + " at node " +
                                               std::to_string(ctx.node) +
                                               "; counts must be >= 1");
    return g;
  }

 private:
  GRule(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  CustomFn fn_;
};

}  // namespace electree
