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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "electree/cli.hpp"

using namespace electree;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path = std::filesystem::temp_directory_path() /
           ("electree-cli-" + std::to_string(stamp));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
  std::string slurp(const std::string& name) const {
    std::ifstream in(path / name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
};

const std::string kWeightedPath = R"({
  "nodes": [{"id": 0, "weight": 1}, {"id": 1, "weight": 2}, {"id": 2, "weight": 3}],
  "edges": [[0, 1], [1, 2]]
})";

}  // namespace

TEST_CASE("gen writes a parseable star and reports its size") {
  const CliResult r = run({"gen", "star", "6"});
  REQUIRE(r.code == 0);
  REQUIRE(r.err == "n=6 edges=5\n");
  const TreeDocument doc = parse_tree(r.out, TreeFormat::json);
  REQUIRE(doc.tree.size() == 6);
  REQUIRE(doc.tree.degree(0) == 5);
}

TEST_CASE("gen builds caterpillars from leg counts") {
  const CliResult r = run({"gen", "caterpillar", "2,3,1"});
  REQUIRE(r.code == 0);
  REQUIRE(parse_tree(r.out, TreeFormat::json).tree.size() == 9);
}

TEST_CASE("gen random is seed-deterministic") {
  const CliResult a = run({"gen", "random", "10", "--seed", "7"});
  const CliResult b = run({"gen", "random", "10", "--seed", "7"});
  REQUIRE(a.code == 0);
  REQUIRE(a.out == b.out);
  const CliResult c = run({"gen", "random", "10", "--seed", "8"});
  REQUIRE(c.out != a.out);
}

TEST_CASE("gen rejects unknown families and bad sizes as usage errors") {
  REQUIRE(run({"gen", "pentagram", "5"}).code == 2);
  REQUIRE(run({"gen", "path", "0"}).code == 2);
  REQUIRE(run({"gen", "path", "x"}).code == 2);
  REQUIRE(run({"gen", "path"}).code == 2);
}

TEST_CASE("exact uniform puts equal mass everywhere") {
  const CliResult r = run({"exact", "--gen", "path:5", "--scheme", "uniform"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["provenance"] == "exact_first_category");
  REQUIRE(doc["nodes"].size() == 5);
  for (const auto& node : doc["nodes"])
    REQUIRE(std::abs(node["q"].get<double>() - 0.2) <= 1e-12);
  REQUIRE(std::abs(doc["sum"].get<double>() - 1.0) <= 1e-9);
}

TEST_CASE("exact weight follows the weights in the tree file") {
  const TempDir tmp;
  const std::string tree = tmp.file("weighted.json", kWeightedPath);
  const CliResult r = run({"exact", "--tree", tree, "--scheme", "weight"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const std::vector<double> expect = {1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0};
  for (std::size_t i = 0; i < 3; ++i)
    REQUIRE(std::abs(doc["nodes"][i]["q"].get<double>() - expect[i]) <= 1e-9);
}

TEST_CASE("exact stable reproduces the star leaf formula") {
  const CliResult r = run({"exact", "--gen", "star:3", "--scheme", "stable"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["provenance"] == "exact_stable");
  const double leaf = 1.0 - kTwoOverPi * std::atan(2.0);
  REQUIRE(std::abs(doc["nodes"][1]["q"].get<double>() - leaf) <= 1e-12);
  REQUIRE(std::abs(doc["nodes"][2]["q"].get<double>() - leaf) <= 1e-12);
}

TEST_CASE("exact rejects simulation-only schemes with a pointer to simulate") {
  for (const std::string scheme : {"constant-rate", "poisson"}) {
    const CliResult r = run({"exact", "--gen", "path:4", "--scheme", scheme});
    REQUIRE(r.code == 2);
    REQUIRE(r.err.find("simulate") != std::string::npos);
  }
}

TEST_CASE("exact weight on real weights advises the poisson path") {
  const TempDir tmp;
  const std::string tree = tmp.file("real.json", R"({
    "nodes": [{"id": 0, "weight": 0.5}, {"id": 1, "weight": 1.5}],
    "edges": [[0, 1]]
  })");
  const CliResult r = run({"exact", "--tree", tree, "--scheme", "weight"});
  REQUIRE(r.code == 3);
  REQUIRE(r.err.find("poisson") != std::string::npos);
}

TEST_CASE("exact csv output carries the data and the sum check") {
  const CliResult r = run({"exact", "--gen", "path:4", "--scheme", "uniform", "--format", "csv"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out ==
          "id,q,half_width\n"
          "0,0.25,0\n"
          "1,0.25,0\n"
          "2,0.25,0\n"
          "3,0.25,0\n"
          "# sum = 1\n");
}

TEST_CASE("exact respects --out") {
  const TempDir tmp;
  const std::string out_path = (tmp.path / "table.json").string();
  const CliResult r =
      run({"exact", "--gen", "path:3", "--scheme", "uniform", "--out", out_path});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.empty());
  const auto doc = nlohmann::json::parse(tmp.slurp("table.json"));
  REQUIRE(doc["nodes"].size() == 3);
}

TEST_CASE("exact keeps external node ids") {
  const TempDir tmp;
  const std::string tree = tmp.file("ids.json", R"({
    "nodes": [{"id": 42}, {"id": 7}, {"id": 19}],
    "edges": [[42, 7], [7, 19]]
  })");
  const CliResult r = run({"exact", "--tree", tree, "--scheme", "uniform"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["nodes"][0]["id"] == 42);
  REQUIRE(doc["nodes"][1]["id"] == 7);
  REQUIRE(doc["nodes"][2]["id"] == 19);
}

TEST_CASE("simulate reports the table plus run statistics") {
  const CliResult r = run({"simulate", "--gen", "path:3", "--scheme", "uniform", "--trials",
                           "2000", "--seed", "5"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["provenance"] == "empirical");
  REQUIRE(doc["trials"] == 2000);
  REQUIRE(doc["successes"] == 2000);
  REQUIRE(doc["failure_rate"] == 0.0);
  REQUIRE(doc["mean_duration"].get<double>() > 0.0);
  REQUIRE(std::abs(doc["sum"].get<double>() - 1.0) <= 1e-9);
  for (const auto& node : doc["nodes"]) {
    REQUIRE(std::abs(node["q"].get<double>() - 1.0 / 3.0) < 0.05);
    REQUIRE(node["half_width"].get<double>() > 0.0);
  }
}

TEST_CASE("simulate writes a JSONL trace of the first trial") {
  const TempDir tmp;
  const std::string trace_path = (tmp.path / "trace.jsonl").string();
  const CliResult r = run({"simulate", "--gen", "path:3", "--scheme", "uniform", "--trials",
                           "3", "--seed", "5", "--trace", trace_path});
  REQUIRE(r.code == 0);

  std::istringstream lines(tmp.slurp("trace.jsonl"));
  std::string line;
  int events = 0, terminal = 0;
  while (std::getline(lines, line)) {
    const auto ev = nlohmann::json::parse(line);
    for (const char* key : {"t", "event", "node", "C", "g", "Gamma"}) REQUIRE(ev.contains(key));
    const std::string kind = ev["event"].get<std::string>();
    if (kind == "elected" || kind == "failure") ++terminal;
    ++events;
  }
  // One trial of a 3-node election: 3 leaf events, 2 deaths, 1 terminal.
  REQUIRE(events == 6);
  REQUIRE(terminal == 1);
}

TEST_CASE("simulate propagates per-trial scheme errors as input errors") {
  const TempDir tmp;
  const std::string tree = tmp.file("real.json", R"({
    "nodes": [{"id": 0, "weight": 0.5}, {"id": 1, "weight": 1.5}],
    "edges": [[0, 1]]
  })");
  const CliResult r = run({"simulate", "--tree", tree, "--scheme", "weight", "--trials", "10"});
  REQUIRE(r.code == 3);
  REQUIRE(r.err.find("trial 0") != std::string::npos);
}

TEST_CASE("verify passes the uniform scheme on a path") {
  const CliResult r = run({"verify", "--gen", "path:5", "--scheme", "uniform"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("result: PASS") != std::string::npos);
  REQUIRE(r.out.find("max |z|") != std::string::npos);
  REQUIRE(r.out.find("q_exact") != std::string::npos);
}

TEST_CASE("verify passes the stable scheme on a star") {
  const CliResult r = run({"verify", "--gen", "star:5", "--scheme", "stable"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("result: PASS") != std::string::npos);
}

TEST_CASE("verify checks constant-rate against the enumeration oracle") {
  const CliResult r = run({"verify", "--gen", "path:3", "--scheme", "constant-rate"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("result: PASS") != std::string::npos);
  // Oracle column for the path: 1/4, 1/2, 1/4.
  REQUIRE(r.out.find("0.250000000") != std::string::npos);
  REQUIRE(r.out.find("0.500000000") != std::string::npos);
  REQUIRE(r.out.find("threshold 3.0") != std::string::npos);
}

TEST_CASE("verify reports the poisson failure rate") {
  const CliResult r = run({"verify", "--gen", "path:3", "--scheme", "poisson", "--trials",
                           "20000"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("failure_rate expected=") != std::string::npos);
  REQUIRE(r.out.find("result: PASS") != std::string::npos);
}

TEST_CASE("verify refuses constant-rate trees beyond the oracle bound") {
  const CliResult r = run({"verify", "--gen", "path:12", "--scheme", "constant-rate"});
  REQUIRE(r.code == 2);
  REQUIRE(r.err.find("9") != std::string::npos);
}

TEST_CASE("verify output is byte-identical across runs") {
  const std::vector<std::string> args = {"verify", "--gen",   "star:4", "--scheme",
                                         "degree", "--seed",  "99",     "--trials",
                                         "20000"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  REQUIRE(a.code == 0);
  REQUIRE(a.out == b.out);
}

TEST_CASE("identity checks pass and fail by exit code") {
  const CliResult reciprocal = run({"identities", "--check", "reciprocal", "--x", "2.5"});
  REQUIRE(reciprocal.code == 0);
  REQUIRE(reciprocal.out.find("result: PASS") != std::string::npos);
  REQUIRE(reciprocal.out.find("abs_error") != std::string::npos);

  REQUIRE(run({"identities", "--check", "star", "--n", "7"}).code == 0);
  REQUIRE(run({"identities", "--check", "caterpillar", "--alphas", "1,2,3"}).code == 0);

  REQUIRE(run({"identities", "--check", "golden"}).code == 2);
  REQUIRE(run({"identities", "--check", "caterpillar"}).code == 2);
  REQUIRE(run({"identities", "--check", "reciprocal", "--x", "-1"}).code == 2);
}

TEST_CASE("usage errors exit with code 2") {
  REQUIRE(run({}).code == 2);
  REQUIRE(run({"exact", "--scheme", "uniform"}).code == 2);  // no tree source
  REQUIRE(run({"exact", "--gen", "path:3", "--tree", "x.json", "--scheme", "uniform"}).code ==
          2);  // both sources
  REQUIRE(run({"exact", "--gen", "path:3", "--scheme", "nonesuch"}).code == 2);
  REQUIRE(run({"exact", "--gen", "path:3", "--scheme", "uniform", "--format", "xml"}).code == 2);
  REQUIRE(run({"simulate", "--gen", "path:3", "--scheme", "uniform", "--trials", "0"}).code ==
          2);
}

TEST_CASE("help is not an error") {
  const CliResult r = run({"--help"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("gen") != std::string::npos);
}

TEST_CASE("input errors exit with code 3") {
  const TempDir tmp;
  REQUIRE(run({"exact", "--tree", (tmp.path / "missing.json").string(), "--scheme",
               "uniform"})
              .code == 3);
  const std::string bad_json = tmp.file("bad.json", "{ this is not json");
  REQUIRE(run({"exact", "--tree", bad_json, "--scheme", "uniform"}).code == 3);
  const std::string dup = tmp.file("dup.txt", "0 1\n0 1\n");
  const CliResult r = run({"exact", "--tree", dup, "--scheme", "uniform"});
  REQUIRE(r.code == 3);
  REQUIRE(r.err.find("duplicate") != std::string::npos);
}
