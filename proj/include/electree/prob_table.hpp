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

#include <charconv>
#include <cstdint>
#include <numeric>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "electree/error.hpp"

namespace electree {

enum class Provenance {
  exact_first_category,
  exact_stable,
  exact_enumeration,
  empirical,
};

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact_first_category: return "exact_first_category";
    case Provenance::exact_stable: return "exact_stable";
    case Provenance::exact_enumeration: return "exact_enumeration";
    case Provenance::empirical: return "empirical";
  }
  return "unknown";
}

/// Per-node election probabilities with their provenance. Exact provenances
/// carry half_width 0 and sum to 1 within 1e-9; empirical tables carry a 99%
/// normal-approximation confidence half-width per entry.
struct ProbTable {
  std::vector<double> q;
  std::vector<double> half_width;
  Provenance provenance = Provenance::empirical;

  double sum() const { return std::accumulate(q.begin(), q.end(), 0.0); }

  /// {"nodes":[{"id","q","half_width"}...],"provenance","sum"}; ids defaults
  /// to 0..n-1 when the tree came from a generator.
  std::string to_json(const std::vector<std::int64_t>* ids = nullptr) const {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < q.size(); ++i) {
      nodes.push_back({{"id", ids ? (*ids)[i] : static_cast<std::int64_t>(i)},
                       {"q", q[i]},
                       {"half_width", half_width[i]}});
    }
    return nlohmann::json{{"nodes", std::move(nodes)},
                          {"provenance", to_string(provenance)},
                          {"sum", sum()}}
        .dump(2);
  }

  /// Data rows plus a trailing "# sum = ..." comment carrying the
  /// sum-to-one check value.
  std::string to_csv(const std::vector<std::int64_t>* ids = nullptr) const {
    std::string out = "id,q,half_width\n";
    char buf[32];
    const auto append_double = [&out, &buf](double x) {
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
      if (ec != std::errc{}) throw Error(ErrorCode::numeric_error, "unprintable value");
      out.append(buf, end);
    };
    for (std::size_t i = 0; i < q.size(); ++i) {
      out += std::to_string(ids ? (*ids)[i] : static_cast<std::int64_t>(i));
      out += ',';
      append_double(q[i]);
      out += ',';
      append_double(half_width[i]);
      out += '\n';
    }
    out += "# sum = ";
    append_double(sum());
    out += '\n';
    return out;
  }
};

}  // namespace electree
