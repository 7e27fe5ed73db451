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
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "electree/distributions.hpp"
#include "electree/error.hpp"
#include "electree/grule.hpp"
#include "electree/prob_table.hpp"
#include "electree/rng.hpp"
#include "electree/tree.hpp"

namespace electree {

// --- schemes ------------------------------------------------------------------

/// Leaf lifetime is the sum of g fresh unit-rate exponentials at rates
/// C+1..C+g, where C totals the counts accumulated in the eliminated
/// neighborhood; the node passes on (C + g) together with size and
/// path-length sums so downstream rank rules can be evaluated.
struct FirstCategory {
  GRule rule;
};

/// Leaf lifetime arranged so that every node's death time equals
/// Gamma = X + sum of received Gammas, X ~ stable of index 1/2.
struct SecondCategoryStable {};

/// Memoryless baseline: every leaf lives Expo(rate) afresh.
struct ConstantRate {
  double rate = 1.0;
};

/// Real-weight variant: a node becoming a leaf draws W ~ Poisson(scale * w_u)
/// once and then behaves like the first category with g = W; W = 0 is an
/// instant death, and a run where the last node dies this way is a Failure.
struct PoissonWeighted {
  double scale = 1.0;
};

using Scheme = std::variant<FirstCategory, SecondCategoryStable, ConstantRate, PoissonWeighted>;

inline std::string scheme_name(const Scheme& scheme) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FirstCategory>)
          return "first-category(" + s.rule.name() + ")";
        else if constexpr (std::is_same_v<T, SecondCategoryStable>)
          return "stable";
        else if constexpr (std::is_same_v<T, ConstantRate>)
          return "constant-rate(" + std::to_string(s.rate) + ")";
        else
          return "poisson(" + std::to_string(s.scale) + ")";
      },
      scheme);
}

// --- outcomes and tracing -----------------------------------------------------

struct Elimination {
  NodeId node;
  double time;
  NodeId recipient;  // -1 for the final death of a failed run
};

inline constexpr NodeId kFailure = -1;

/// Full record of one election: the winner (kFailure for a failed run), the
/// deaths in processing order, when each node became a leaf, and the time of
/// the last event.
struct ElectionOutcome {
  NodeId winner = kFailure;
  std::vector<Elimination> eliminations;
  std::vector<double> leaf_times;
  double duration = 0.0;

  bool failed() const { return winner == kFailure; }
};

struct TraceEvent {
  double t = 0.0;
  const char* event = "";  // "becomes_leaf" | "death" | "elected" | "failure"
  NodeId node = 0;
  std::optional<std::int64_t> c;
  std::optional<std::int64_t> g;
  std::optional<double> gamma;
};

using TraceSink = std::function<void(const TraceEvent&)>;

// --- event-driven engine ------------------------------------------------------

namespace detail {

struct NodeState {
  std::int32_t alive_degree = 0;
  bool alive = true;
  bool scheduled = false;
  double death_time = 0.0;
  double leaf_time = -1.0;
  // First-category family: aggregate of received summaries and the values
  // fixed at draw time.
  ChildAggregate received;
  std::int64_t c = 0;
  std::int64_t g = 0;
  // Stable scheme: aggregate of received Gammas and the node's own Gamma.
  double gamma_sum = 0.0;
  double gamma_max = 0.0;
  double gamma = 0.0;
};

struct PendingDeath {
  double time;
  NodeId node;
  bool operator>(const PendingDeath& o) const {
    return time > o.time || (time == o.time && node > o.node);
  }
};

class ElectionEngine {
 public:
  ElectionEngine(const Tree& tree, const Scheme& scheme, RngStream& rng, TraceSink* trace)
      : tree_(tree), scheme_(scheme), rng_(rng), trace_(trace) {
    states_.resize(static_cast<std::size_t>(tree.size()));
    for (NodeId u = 0; u < tree.size(); ++u)
      states_[static_cast<std::size_t>(u)].alive_degree = tree.degree(u);
  }

  /// Undirected election. Runs until one node is alone (elected, unless the
  /// zero-lifetime tie rule turns the run into a failure).
  ElectionOutcome run_election() {
    const NodeId n = tree_.size();
    ElectionOutcome out;
    out.leaf_times.assign(static_cast<std::size_t>(n), -1.0);
    for (NodeId u = 0; u < n; ++u)
      if (tree_.degree(u) <= 1) become_leaf(u, 0.0);
    alive_count_ = n;

    if (n == 1) {
      finish_lone_node(0, 0.0, out);
      out.leaf_times = leaf_times();
      return out;
    }

    while (alive_count_ > 1) {
      // One entry per node and deaths of isolated nodes are resolved inline,
      // so every popped entry is a live leaf.
      const PendingDeath ev = pop_next();
      const NodeId u = ev.node;
      const NodeId r = sole_alive_neighbor(u);
      kill(u, ev.time, r);
      out.eliminations.push_back({u, ev.time, r});
      NodeState& sr = states_[static_cast<std::size_t>(r)];
      if (--sr.alive_degree == 1 && !sr.scheduled) become_leaf(r, ev.time);
      --alive_count_;
      if (alive_count_ == 1) {
        finish_lone_node(r, ev.time, out);
        break;
      }
    }
    out.leaf_times = leaf_times();
    return out;
  }

  /// Directed elimination rooted at `root`: the root is never scheduled as a
  /// leaf; once alone it draws a lifetime from everything it received and
  /// dies. Returns the root's death time.
  double run_directed(NodeId root) {
    const NodeId n = tree_.size();
    for (NodeId u = 0; u < n; ++u)
      if (u != root && tree_.degree(u) <= 1) become_leaf(u, 0.0);
    alive_count_ = n;

    double t = 0.0;
    while (alive_count_ > 1) {
      const PendingDeath ev = pop_next();
      const NodeId u = ev.node;
      t = ev.time;
      const NodeId r = sole_alive_neighbor(u);
      kill(u, ev.time, r);
      NodeState& sr = states_[static_cast<std::size_t>(r)];
      if (--sr.alive_degree == 1 && r != root && !sr.scheduled) become_leaf(r, ev.time);
      --alive_count_;
    }
    schedule(root, t);
    return states_[static_cast<std::size_t>(root)].death_time;
  }

 private:
  void become_leaf(NodeId u, double now) { schedule(u, now); }

  // Draws the node's lifetime from its received aggregate and schedules the
  // death. Called exactly once per node.
  void schedule(NodeId u, double now) {
    NodeState& s = states_[static_cast<std::size_t>(u)];
    s.scheduled = true;
    s.leaf_time = now;
    double death = 0.0;
    std::visit(
        [&](const auto& scheme) {
          using T = std::decay_t<decltype(scheme)>;
          if constexpr (std::is_same_v<T, FirstCategory>) {
            s.c = s.received.theta_sum;
            s.g = scheme.rule({u, tree_.weight(u), tree_.degree(u)}, s.received);
            death = now + sample_sum_exp_seq(rng_, s.c, s.g);
          } else if constexpr (std::is_same_v<T, PoissonWeighted>) {
            s.c = s.received.theta_sum;
            s.g = sample_poisson(rng_, scheme.scale * tree_.weight(u));
            death = now + sample_sum_exp_seq(rng_, s.c, s.g);
          } else if constexpr (std::is_same_v<T, ConstantRate>) {
            death = now + sample_exponential(rng_, scheme.rate);
          } else {
            const double x = sample_stable_half(rng_);
            s.gamma = x + s.gamma_sum;
            // Death at Gamma exactly; now == gamma_max for non-initial
            // leaves, so this equals now + (x + sum - max).
            death = s.gamma;
          }
        },
        scheme_);
    if (std::isnan(death))
      throw Error(ErrorCode::numeric_error, "lifetime is NaN at node " + std::to_string(u));
    s.death_time = death;
    queue_.push({death, u});
    if (trace_) emit_leaf_trace(u, now, s);
  }

  // Removes u from the alive set and transmits its computed value to r
  // (r = -1 when u is the last node of a failed run).
  void kill(NodeId u, double t, NodeId r) {
    NodeState& s = states_[static_cast<std::size_t>(u)];
    s.alive = false;
    if (r >= 0) {
      NodeState& sr = states_[static_cast<std::size_t>(r)];
      std::visit(
          [&](const auto& scheme) {
            using T = std::decay_t<decltype(scheme)>;
            if constexpr (std::is_same_v<T, FirstCategory> ||
                          std::is_same_v<T, PoissonWeighted>) {
              sr.received.add(s.c + s.g, 1 + s.received.size_sum,
                              s.received.pls_sum + s.received.size_sum);
            } else if constexpr (std::is_same_v<T, SecondCategoryStable>) {
              sr.gamma_sum += s.gamma;
              sr.gamma_max = std::max(sr.gamma_max, s.gamma);
            }
          },
          scheme_);
    }
    if (trace_) emit_death_trace(u, t, s);
  }

  // Resolution when one node remains: elected at the isolating time, unless
  // its pending death carries that exact timestamp (a zero-lifetime cascade),
  // in which case it dies too and the run fails.
  void finish_lone_node(NodeId u, double t, ElectionOutcome& out) {
    const NodeState& s = states_[static_cast<std::size_t>(u)];
    if (s.scheduled && s.death_time == t) {
      kill(u, t, -1);
      out.eliminations.push_back({u, t, -1});
      out.winner = kFailure;
      out.duration = t;
      if (trace_) (*trace_)({t, "failure", u, {}, {}, {}});
      return;
    }
    out.winner = u;
    out.duration = t;
    if (trace_) (*trace_)({t, "elected", u, {}, {}, {}});
  }

  // Pops the earliest pending death; among exactly-equal times the choice is
  // uniformly random (randomness consumed only on ties).
  PendingDeath pop_next() {
    PendingDeath first = queue_.top();
    queue_.pop();
    if (queue_.empty() || queue_.top().time != first.time) return first;
    std::vector<PendingDeath> tied{first};
    while (!queue_.empty() && queue_.top().time == first.time) {
      tied.push_back(queue_.top());
      queue_.pop();
    }
    const std::size_t pick = static_cast<std::size_t>(rng_.next_below(tied.size()));
    const PendingDeath chosen = tied[pick];
    for (std::size_t i = 0; i < tied.size(); ++i)
      if (i != pick) queue_.push(tied[i]);
    return chosen;
  }

  NodeId sole_alive_neighbor(NodeId u) const {
    for (NodeId v : tree_.neighbors(u))
      if (states_[static_cast<std::size_t>(v)].alive) return v;
    return -1;
  }

  std::vector<double> leaf_times() const {
    std::vector<double> out(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) out[i] = states_[i].leaf_time;
    return out;
  }

  void emit_leaf_trace(NodeId u, double t, const NodeState& s) const {
    TraceEvent ev{t, "becomes_leaf", u, {}, {}, {}};
    fill_values(ev, s);
    (*trace_)(ev);
  }
  void emit_death_trace(NodeId u, double t, const NodeState& s) const {
    TraceEvent ev{t, "death", u, {}, {}, {}};
    fill_values(ev, s);
    (*trace_)(ev);
  }
  void fill_values(TraceEvent& ev, const NodeState& s) const {
    if (std::holds_alternative<FirstCategory>(scheme_) ||
        std::holds_alternative<PoissonWeighted>(scheme_)) {
      ev.c = s.c;
      ev.g = s.g;
      ev.gamma = static_cast<double>(s.c + s.g);
    } else if (std::holds_alternative<SecondCategoryStable>(scheme_)) {
      ev.gamma = s.gamma;
    }
  }

  const Tree& tree_;
  const Scheme& scheme_;
  RngStream& rng_;
  TraceSink* trace_;
  std::vector<NodeState> states_;
  std::priority_queue<PendingDeath, std::vector<PendingDeath>, std::greater<>> queue_;
  NodeId alive_count_ = 0;
};

}  // namespace detail

/// One complete election of ALGO(Delta) on the tree.
inline ElectionOutcome run_election(const Tree& tree, const Scheme& scheme, RngStream& rng,
                                    TraceSink trace = {}) {
  detail::ElectionEngine engine(tree, scheme, rng, trace ? &trace : nullptr);
  return engine.run_election();
}

/// One directed elimination of ALGO*(Delta): every node is eliminated
/// leaf-to-root and the root dies last; returns the root's death time.
inline double run_directed(const Tree& tree, NodeId root, const Scheme& scheme, RngStream& rng,
                           TraceSink trace = {}) {
  if (root < 0 || root >= tree.size())
    throw Error(ErrorCode::bad_node, "root " + std::to_string(root) + " is not in the tree");
  detail::ElectionEngine engine(tree, scheme, rng, trace ? &trace : nullptr);
  return engine.run_directed(root);
}

// --- Monte Carlo --------------------------------------------------------------

struct MonteCarloResult {
  ProbTable table;
  double failure_rate = 0.0;
  double mean_duration = 0.0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
};

/// 99% two-sided normal quantile used for empirical confidence half-widths.
inline constexpr double kZ99 = 2.5758293035489004;

/// Empirical election probabilities over independent trials. Trial i uses
/// RngStream(seed, i), so the result is reproducible and independent of any
/// execution order; win probabilities are conditional on successful trials,
/// with the failure rate reported separately.
inline MonteCarloResult monte_carlo(const Tree& tree, const Scheme& scheme,
                                    std::int64_t trials, std::uint64_t seed,
                                    TraceSink first_trial_trace = {}) {
  if (trials < 1) throw Error(ErrorCode::bad_parameter, "trials must be >= 1");
  const NodeId n = tree.size();
  std::vector<std::int64_t> wins(static_cast<std::size_t>(n), 0);
  std::int64_t failures = 0;
  double duration_sum = 0.0;

  for (std::int64_t i = 0; i < trials; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    try {
      const ElectionOutcome outcome =
          run_election(tree, scheme, rng, i == 0 ? first_trial_trace : TraceSink{});
      if (outcome.failed())
        ++failures;
      else
        ++wins[static_cast<std::size_t>(outcome.winner)];
      duration_sum += outcome.duration;
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(i) + ": " + e.message());
    }
  }

  const std::int64_t successes = trials - failures;
  MonteCarloResult result;
  result.trials = trials;
  result.successes = successes;
  result.failure_rate = static_cast<double>(failures) / static_cast<double>(trials);
  result.mean_duration = duration_sum / static_cast<double>(trials);
  result.table.provenance = Provenance::empirical;
  result.table.q.resize(static_cast<std::size_t>(n));
  result.table.half_width.resize(static_cast<std::size_t>(n));
  for (NodeId u = 0; u < n; ++u) {
    // All-failure runs leave the conditional probabilities undefined; report
    // zeros with zero width rather than dividing by zero.
    const double p = successes > 0
                         ? static_cast<double>(wins[static_cast<std::size_t>(u)]) /
                               static_cast<double>(successes)
                         : 0.0;
    result.table.q[static_cast<std::size_t>(u)] = p;
    result.table.half_width[static_cast<std::size_t>(u)] =
        successes > 0 ? kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(successes)) : 0.0;
  }
  return result;
}

// --- exact oracle for the memoryless baseline ----------------------------------

/// Exact win probabilities under the memoryless scheme, by dynamic
/// programming over alive-sets: from each reachable alive subtree, every
/// current leaf is equally likely to die next. Exponential in n; capped at 9.
inline ProbTable brute_force_memoryless(const Tree& tree) {
  const NodeId n = tree.size();
  if (n > 9)
    throw Error(ErrorCode::size_bound,
                "alive-set enumeration is limited to 9 nodes, got " + std::to_string(n));

  std::vector<std::uint32_t> adjacency(static_cast<std::size_t>(n), 0);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : tree.neighbors(u))
      adjacency[static_cast<std::size_t>(u)] |= (1u << v);

  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> reach(static_cast<std::size_t>(full) + 1, 0.0);
  reach[full] = 1.0;

  ProbTable out;
  out.provenance = Provenance::exact_enumeration;
  out.q.assign(static_cast<std::size_t>(n), 0.0);
  out.half_width.assign(static_cast<std::size_t>(n), 0.0);

  // Masks with higher popcount only ever feed lower ones, so a single sweep
  // grouped by popcount is enough.
  std::vector<std::vector<std::uint32_t>> by_count(static_cast<std::size_t>(n) + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask)
    by_count[static_cast<std::size_t>(std::popcount(mask))].push_back(mask);

  for (std::size_t count = static_cast<std::size_t>(n); count >= 1; --count) {
    for (const std::uint32_t mask : by_count[count]) {
      const double p = reach[mask];
      if (p == 0.0) continue;
      if (count == 1) {
        out.q[static_cast<std::size_t>(std::countr_zero(mask))] += p;
        continue;
      }
      std::uint32_t leaves = 0;
      for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
        const int u = std::countr_zero(rest);
        if (std::popcount(adjacency[static_cast<std::size_t>(u)] & mask) == 1)
          leaves |= (1u << u);
      }
      const double step = p / static_cast<double>(std::popcount(leaves));
      for (std::uint32_t rest = leaves; rest != 0; rest &= rest - 1) {
        const std::uint32_t low = rest & (0u - rest);
        reach[mask & ~low] += step;
      }
    }
  }
  return out;
}

}  // namespace electree
