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
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "electree/error.hpp"
#include "electree/exact.hpp"
#include "electree/prob_table.hpp"
#include "electree/simulate.hpp"
#include "electree/tree.hpp"
#include "electree/tree_io.hpp"

namespace electree {

/// All randomness in a run flows from one --seed; this default keeps
/// unseeded invocations reproducible.
inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr std::int64_t kDefaultTrials = 100000;

/// Stream id reserved for tree generation, outside the range Monte Carlo
/// uses for trial indices, so one seed can drive both.
inline constexpr std::uint64_t kGeneratorStream = 0x8000000000000000ull;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, delim)) parts.push_back(item);
  return parts;
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const std::int64_t value = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::bad_parameter, what + ": not an integer: \"" + s + "\"");
  }
}

inline double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::bad_parameter, what + ": not a number: \"" + s + "\"");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& content,
                         std::ostream& standard_out) {
  if (path.empty()) {
    standard_out << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << content;
}

}  // namespace detail

/// Linear fold rule for --scheme custom-fold:a,b,c,d,m over the children
/// aggregate: g = 1 + ((a*theta + b*size + c*pls + d*degree) mod m).
inline GRule make_fold_rule(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                            std::int64_t m) {
  if (m < 1) throw Error(ErrorCode::bad_parameter, "fold modulus must be >= 1");
  std::string name = "fold(" + std::to_string(a) + "," + std::to_string(b) + "," +
                     std::to_string(c) + "," + std::to_string(d) + "," + std::to_string(m) + ")";
  return GRule::custom(std::move(name),
                       [a, b, c, d, m](const GRuleContext& ctx, const ChildAggregate& agg) {
                         const std::int64_t mix = a * agg.theta_sum + b * agg.size_sum +
                                                  c * agg.pls_sum + d * ctx.degree;
                         return 1 + (((mix % m) + m) % m);
                       });
}

/// Parses NAME[:params]: uniform | weight | degree | pls | stable |
/// constant-rate[:rate] | poisson[:scale] | custom-fold[:a,b,c,d,m].
inline Scheme parse_scheme_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (name == "uniform" || name == "weight" || name == "degree" || name == "pls") {
    if (!params.empty())
      throw Error(ErrorCode::bad_parameter, "scheme " + name + " takes no parameters");
    if (name == "uniform") return FirstCategory{GRule::unit()};
    if (name == "weight") return FirstCategory{GRule::weight()};
    if (name == "degree") return FirstCategory{GRule::degree()};
    return FirstCategory{GRule::subtree_size()};
  }
  if (name == "stable") {
    if (!params.empty())
      throw Error(ErrorCode::bad_parameter, "scheme stable takes no parameters");
    return SecondCategoryStable{};
  }
  if (name == "constant-rate") {
    double rate = 1.0;
    if (!params.empty()) rate = detail::parse_real(params, "constant-rate rate");
    if (!(rate > 0.0)) throw Error(ErrorCode::bad_parameter, "constant-rate rate must be > 0");
    return ConstantRate{rate};
  }
  if (name == "poisson") {
    double scale = 1.0;
    if (!params.empty()) scale = detail::parse_real(params, "poisson scale");
    if (!(scale > 0.0)) throw Error(ErrorCode::bad_parameter, "poisson scale must be > 0");
    return PoissonWeighted{scale};
  }
  if (name == "custom-fold") {
    std::int64_t coef[5] = {1, 1, 1, 1, 7};
    if (!params.empty()) {
      const auto parts = detail::split(params, ',');
      if (parts.size() != 5)
        throw Error(ErrorCode::bad_parameter, "custom-fold takes 5 parameters a,b,c,d,m");
      for (std::size_t i = 0; i < 5; ++i)
        coef[i] = detail::parse_int(parts[i], "custom-fold parameter");
    }
    return FirstCategory{make_fold_rule(coef[0], coef[1], coef[2], coef[3], coef[4])};
  }
  throw Error(ErrorCode::bad_parameter,
              "unknown scheme \"" + name +
                  "\"; expected uniform, weight, degree, pls, stable, constant-rate, "
                  "poisson, or custom-fold");
}

/// Builds a tree from "family:params": path:N | star:N | double-star:A,B |
/// caterpillar:C1,C2,... | random:N (random uses the run's seed).
inline TreeDocument generate_tree(const std::string& family, const std::string& params,
                                  std::uint64_t seed) {
  const auto need_counts = [&params](const char* what) {
    if (params.empty())
      throw Error(ErrorCode::bad_parameter, std::string(what) + " needs size parameters");
    return detail::split(params, ',');
  };
  if (family == "path" || family == "star" || family == "random") {
    const auto parts = need_counts(family.c_str());
    if (parts.size() != 1)
      throw Error(ErrorCode::bad_parameter, family + " takes one size parameter");
    const std::int64_t n = detail::parse_int(parts[0], family + " size");
    if (n < 1 || n > 10000000)
      throw Error(ErrorCode::size_bound, family + " size out of range: " + parts[0]);
    if (family == "path") return TreeDocument::from_tree(make_path(static_cast<NodeId>(n)));
    if (family == "star") return TreeDocument::from_tree(make_star(static_cast<NodeId>(n)));
    RngStream rng(seed, kGeneratorStream);
    return TreeDocument::from_tree(make_random_tree(static_cast<NodeId>(n), rng));
  }
  if (family == "double-star") {
    const auto parts = need_counts("double-star");
    if (parts.size() != 2)
      throw Error(ErrorCode::bad_parameter, "double-star takes two leaf counts a,b");
    const std::int64_t a = detail::parse_int(parts[0], "double-star a");
    const std::int64_t b = detail::parse_int(parts[1], "double-star b");
    return TreeDocument::from_tree(
        make_double_star(static_cast<NodeId>(a), static_cast<NodeId>(b)));
  }
  if (family == "caterpillar") {
    const auto parts = need_counts("caterpillar");
    std::vector<NodeId> counts;
    counts.reserve(parts.size());
    for (const auto& p : parts)
      counts.push_back(static_cast<NodeId>(detail::parse_int(p, "caterpillar leg count")));
    return TreeDocument::from_tree(make_caterpillar(counts));
  }
  throw Error(ErrorCode::bad_parameter,
              "unknown tree family \"" + family +
                  "\"; expected path, star, double-star, caterpillar, or random");
}

inline TreeDocument generate_from_spec(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  return generate_tree(spec.substr(0, colon),
                       colon == std::string::npos ? "" : spec.substr(colon + 1), seed);
}

namespace detail {

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::bad_parameter:
    case ErrorCode::size_bound:
      return 2;
    default:
      return 3;
  }
}

inline TreeDocument load_tree(const std::string& tree_path, const std::string& gen_spec,
                              std::uint64_t seed) {
  if (tree_path.empty() == gen_spec.empty())
    throw Error(ErrorCode::bad_parameter, "provide exactly one of --tree FILE or --gen SPEC");
  if (!tree_path.empty()) return parse_tree_auto(read_file(tree_path));
  return generate_from_spec(gen_spec, seed);
}

inline TraceSink make_trace_sink(std::ofstream& file, const std::vector<std::int64_t>& ids) {
  return [&file, &ids](const TraceEvent& ev) {
    nlohmann::json line{{"t", ev.t},
                        {"event", ev.event},
                        {"node", ids[static_cast<std::size_t>(ev.node)]},
                        {"C", ev.c ? nlohmann::json(*ev.c) : nlohmann::json(nullptr)},
                        {"g", ev.g ? nlohmann::json(*ev.g) : nlohmann::json(nullptr)},
                        {"Gamma", ev.gamma ? nlohmann::json(*ev.gamma) : nlohmann::json(nullptr)}};
    file << line.dump() << "\n";
  };
}

// Exact table for schemes with a closed form; empty optional means the
// scheme is simulation-only.
inline std::optional<ProbTable> exact_table_for(const TreeDocument& doc, const Scheme& scheme) {
  if (const auto* fc = std::get_if<FirstCategory>(&scheme))
    return q_first_category(doc.tree, fc->rule);
  if (std::holds_alternative<SecondCategoryStable>(scheme)) return q_stable(doc.tree);
  return std::nullopt;
}

struct VerifyExpectation {
  ProbTable table;
  double z_threshold = 4.0;
  // Expected failure probability; negative when the scheme cannot fail.
  double failure_prob = -1.0;
};

inline VerifyExpectation verify_expectation(const TreeDocument& doc, const Scheme& scheme,
                                            const std::string& scheme_spec) {
  if (std::holds_alternative<ConstantRate>(scheme)) {
    if (doc.tree.size() > 9)
      throw Error(ErrorCode::size_bound,
                  "constant-rate has no closed form; the enumeration oracle handles n <= 9 only");
    return {brute_force_memoryless(doc.tree), 3.0, -1.0};
  }
  if (const auto* pw = std::get_if<PoissonWeighted>(&scheme)) {
    // Conditional on success the win odds are proportional to the weights,
    // and failure happens exactly when every Poisson count is zero.
    ProbTable expected;
    expected.provenance = Provenance::exact_first_category;
    const double total = doc.tree.total_weight();
    for (NodeId u = 0; u < doc.tree.size(); ++u) {
      expected.q.push_back(doc.tree.weight(u) / total);
      expected.half_width.push_back(0.0);
    }
    return {std::move(expected), 4.0, std::exp(-pw->scale * total)};
  }
  auto exact = exact_table_for(doc, scheme);
  if (!exact)
    throw Error(ErrorCode::bad_parameter,
                "scheme " + scheme_spec + " has no exact reference to verify against");
  return {std::move(*exact), 4.0, -1.0};
}

inline double z_score(double expected, double observed, std::int64_t samples) {
  const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(samples));
  if (se == 0.0) return expected == observed ? 0.0 : std::numeric_limits<double>::infinity();
  return (observed - expected) / se;
}

}  // namespace detail

/// Runs the command line given argv-style arguments (program name excluded).
/// All output goes to the given streams; returns the process exit code:
/// 0 success/pass, 1 verification failure, 2 usage error, 3 input error.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized leaf-elimination leader election on trees"};
  app.require_subcommand(1);

  std::string tree_path, gen_spec, scheme_spec, format = "json", out_path, trace_path;
  std::int64_t trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  std::string gen_family, gen_params;
  std::string check_name;
  double check_x = 1.0;
  std::int64_t check_n = 2;
  std::string check_alphas;

  const auto add_tree_source = [&](CLI::App* cmd) {
    cmd->add_option("--tree", tree_path, "Tree file (JSON or edge list)");
    cmd->add_option("--gen", gen_spec,
                    "Generator spec: path:N | star:N | double-star:A,B | "
                    "caterpillar:C1,C2,... | random:N");
  };
  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Output path (default: standard output)");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed (default " + std::to_string(kDefaultSeed) + ")");
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate a tree and write it as JSON");
  gen->add_option("family", gen_family, "path | star | double-star | caterpillar | random")
      ->required();
  gen->add_option("params", gen_params, "Comma-separated sizes, e.g. 6 or 2,3,1");
  add_seed(gen);
  add_output(gen);

  CLI::App* exact = app.add_subcommand("exact", "Closed-form election probabilities");
  add_tree_source(exact);
  exact->add_option("--scheme", scheme_spec,
                    "uniform | weight | degree | pls | stable | custom-fold[:a,b,c,d,m]")
      ->required();
  exact->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_seed(exact);
  add_output(exact);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo election frequencies");
  add_tree_source(simulate);
  simulate
      ->add_option("--scheme", scheme_spec,
                   "uniform | weight | degree | pls | stable | constant-rate[:r] | "
                   "poisson[:s] | custom-fold[:a,b,c,d,m]")
      ->required();
  simulate->add_option("--trials", trials, "Number of trials (default 100000)");
  add_seed(simulate);
  simulate->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_output(simulate);
  simulate->add_option("--trace", trace_path, "Write the first trial's events as JSON lines");

  CLI::App* verify = app.add_subcommand(
      "verify", "Compare simulation against the exact reference; per-node 4-sigma gate "
                "(3-sigma against the n<=9 enumeration oracle for constant-rate)");
  add_tree_source(verify);
  verify->add_option("--scheme", scheme_spec, "Scheme to verify")->required();
  verify->add_option("--trials", trials, "Number of trials (default 100000)");
  add_seed(verify);
  add_output(verify);

  CLI::App* identities = app.add_subcommand("identities", "Numeric arctangent identity checks");
  identities->add_option("--check", check_name, "reciprocal | star | caterpillar")->required();
  identities->add_option("--x", check_x, "Argument for reciprocal");
  identities->add_option("--n", check_n, "Star size for star");
  identities->add_option("--alphas", check_alphas, "Comma-separated positives for caterpillar");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    // Flatten CLI11's exit-code zoo into the documented contract:
    // 0 for --help and friends, 2 for every usage problem.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      const TreeDocument doc = generate_tree(gen_family, gen_params, seed);
      detail::write_output(out_path, serialize_tree_json(doc) + "\n", out);
      err << "n=" << doc.tree.size() << " edges=" << (doc.tree.size() - 1) << "\n";
      return 0;
    }

    if (exact->parsed()) {
      const TreeDocument doc = detail::load_tree(tree_path, gen_spec, seed);
      const Scheme scheme = parse_scheme_spec(scheme_spec);
      const auto table = detail::exact_table_for(doc, scheme);
      if (!table)
        throw Error(ErrorCode::bad_parameter,
                    "scheme " + scheme_spec +
                        " has no closed form; use the simulate command instead");
      detail::write_output(out_path,
                           format == "csv" ? table->to_csv(&doc.ids)
                                           : table->to_json(&doc.ids) + "\n",
                           out);
      return 0;
    }

    if (simulate->parsed()) {
      const TreeDocument doc = detail::load_tree(tree_path, gen_spec, seed);
      const Scheme scheme = parse_scheme_spec(scheme_spec);
      std::ofstream trace_file;
      TraceSink sink;
      if (!trace_path.empty()) {
        trace_file.open(trace_path, std::ios::binary);
        if (!trace_file) throw Error(ErrorCode::io_error, "cannot write " + trace_path);
        sink = detail::make_trace_sink(trace_file, doc.ids);
      }
      const MonteCarloResult result = monte_carlo(doc.tree, scheme, trials, seed, sink);
      std::string output;
      if (format == "csv") {
        output = result.table.to_csv(&doc.ids);
      } else {
        nlohmann::json object = nlohmann::json::parse(result.table.to_json(&doc.ids));
        object["trials"] = result.trials;
        object["successes"] = result.successes;
        object["failure_rate"] = result.failure_rate;
        object["mean_duration"] = result.mean_duration;
        output = object.dump(2) + "\n";
      }
      detail::write_output(out_path, output, out);
      return 0;
    }

    if (verify->parsed()) {
      const TreeDocument doc = detail::load_tree(tree_path, gen_spec, seed);
      const Scheme scheme = parse_scheme_spec(scheme_spec);
      const detail::VerifyExpectation expected =
          detail::verify_expectation(doc, scheme, scheme_spec);
      const MonteCarloResult result = monte_carlo(doc.tree, scheme, trials, seed);

      std::string report;
      char line[160];
      std::snprintf(line, sizeof line, "verify scheme=%s n=%d trials=%lld seed=%llu\n",
                    scheme_name(scheme).c_str(), static_cast<int>(doc.tree.size()),
                    static_cast<long long>(trials), static_cast<unsigned long long>(seed));
      report += line;
      report += "node        q_exact         q_hat        z\n";
      double max_abs_z = 0.0;
      for (NodeId u = 0; u < doc.tree.size(); ++u) {
        const double q = expected.table.q[static_cast<std::size_t>(u)];
        const double q_hat = result.table.q[static_cast<std::size_t>(u)];
        const double z = detail::z_score(q, q_hat, result.successes);
        max_abs_z = std::max(max_abs_z, std::abs(z));
        std::snprintf(line, sizeof line, "%-6lld %12.9f  %12.9f  %+7.3f\n",
                      static_cast<long long>(doc.ids[static_cast<std::size_t>(u)]), q, q_hat, z);
        report += line;
      }
      if (expected.failure_prob >= 0.0) {
        const double zf =
            detail::z_score(expected.failure_prob, result.failure_rate, result.trials);
        max_abs_z = std::max(max_abs_z, std::abs(zf));
        std::snprintf(line, sizeof line, "failure_rate expected=%.9f observed=%.9f z=%+7.3f\n",
                      expected.failure_prob, result.failure_rate, zf);
        report += line;
      }
      const bool pass = max_abs_z <= expected.z_threshold;
      std::snprintf(line, sizeof line, "max |z| = %.3f (threshold %.1f)\nresult: %s\n",
                    max_abs_z, expected.z_threshold, pass ? "PASS" : "FAIL");
      report += line;
      detail::write_output(out_path, report, out);
      return pass ? 0 : 1;
    }

    // identities
    IdentityReport report;
    std::string label;
    if (check_name == "reciprocal") {
      report = check_identity_reciprocal(check_x);
      char buf[64];
      std::snprintf(buf, sizeof buf, "reciprocal(x=%g)", check_x);
      label = buf;
    } else if (check_name == "star") {
      report = check_identity_star(check_n);
      label = "star(n=" + std::to_string(check_n) + ")";
    } else if (check_name == "caterpillar") {
      if (check_alphas.empty())
        throw Error(ErrorCode::bad_parameter, "caterpillar check needs --alphas");
      std::vector<double> alphas;
      for (const auto& part : detail::split(check_alphas, ','))
        alphas.push_back(detail::parse_real(part, "alpha"));
      report = check_identity_caterpillar(alphas);
      label = "caterpillar(" + check_alphas + ")";
    } else {
      throw Error(ErrorCode::bad_parameter,
                  "unknown identity \"" + check_name +
                      "\"; expected reciprocal, star, or caterpillar");
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "check %s\nlhs = %.15f\nrhs = %.15f\nabs_error = %.3e\n",
                  label.c_str(), report.lhs, report.rhs, report.abs_error);
    out << buf;
    const bool pass = report.abs_error <= 1e-9;
    out << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::scheme_error && scheme_spec == "weight" && exact->parsed()) {
      err << "error: " << e.what() << "\n"
          << "hint: real-valued weights are handled by the randomized variant: "
             "simulate --scheme poisson\n";
      return 3;
    }
    err << "error: " << e.what() << "\n";
    return detail::exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace electree
