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
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "electree/error.hpp"
#include "electree/tree.hpp"

namespace electree {

enum class TreeFormat { json, edgelist };

/// A tree plus the identity of its nodes in the source document: external
/// ids (arbitrary integers, densified to 0..n-1 in input order) and optional
/// labels. Generated trees use the identity mapping.
struct TreeDocument {
  Tree tree;
  std::vector<std::int64_t> ids;
  std::vector<std::string> labels;

  static TreeDocument from_tree(Tree t) {
    TreeDocument doc{std::move(t), {}, {}};
    doc.ids.resize(static_cast<std::size_t>(doc.tree.size()));
    for (NodeId v = 0; v < doc.tree.size(); ++v) doc.ids[static_cast<std::size_t>(v)] = v;
    doc.labels.assign(static_cast<std::size_t>(doc.tree.size()), "");
    return doc;
  }
};

namespace detail {

// Assigns dense indices in order of first appearance.
class IdInterner {
 public:
  NodeId intern(std::int64_t external) {
    auto [it, inserted] = index_.emplace(external, static_cast<NodeId>(order_.size()));
    if (inserted) order_.push_back(external);
    return it->second;
  }
  const NodeId* find(std::int64_t external) const {
    auto it = index_.find(external);
    return it == index_.end() ? nullptr : &it->second;
  }
  const std::vector<std::int64_t>& order() const { return order_; }

 private:
  std::map<std::int64_t, NodeId> index_;
  std::vector<std::int64_t> order_;
};

inline TreeDocument parse_tree_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::bad_syntax, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw Error(ErrorCode::bad_syntax, "tree JSON must be an object with a \"nodes\" array");

  IdInterner ids;
  std::vector<double> weights;
  std::vector<std::string> labels;
  for (const auto& node : doc["nodes"]) {
    if (!node.is_object() || !node.contains("id") || !node["id"].is_number_integer())
      throw Error(ErrorCode::bad_syntax, "every node needs an integer \"id\"");
    const std::int64_t id = node["id"].get<std::int64_t>();
    if (ids.find(id))
      throw Error(ErrorCode::bad_syntax, "duplicate node id " + std::to_string(id));
    ids.intern(id);
    double w = 1.0;
    if (node.contains("weight")) {
      if (!node["weight"].is_number())
        throw Error(ErrorCode::bad_syntax, "node " + std::to_string(id) + ": \"weight\" must be a number");
      w = node["weight"].get<double>();
    }
    if (!(w > 0.0))
      throw Error(ErrorCode::negative_weight,
                  "node " + std::to_string(id) + " has non-positive weight");
    weights.push_back(w);
    labels.push_back(node.value("label", std::string{}));
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array())
      throw Error(ErrorCode::bad_syntax, "\"edges\" must be an array of [u,v] pairs");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw Error(ErrorCode::bad_syntax, "\"edges\" must be an array of [u,v] integer pairs");
      const std::int64_t eu = e[0].get<std::int64_t>();
      const std::int64_t ev = e[1].get<std::int64_t>();
      const NodeId* u = ids.find(eu);
      const NodeId* v = ids.find(ev);
      if (!u) throw Error(ErrorCode::bad_node, "edge endpoint " + std::to_string(eu) + " is not a declared node");
      if (!v) throw Error(ErrorCode::bad_node, "edge endpoint " + std::to_string(ev) + " is not a declared node");
      edges.emplace_back(*u, *v);
    }
  }

  return TreeDocument{
      Tree::from_edges(static_cast<NodeId>(ids.order().size()), edges, std::move(weights)),
      ids.order(), std::move(labels)};
}

inline TreeDocument parse_tree_edgelist(const std::string& text) {
  IdInterner ids;
  std::vector<std::pair<std::int64_t, double>> weight_entries;
  std::vector<std::pair<NodeId, NodeId>> edges;

  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first.starts_with("#")) {
      // Only "# weights: u w" headers carry data; other comments are skipped.
      std::string keyword;
      if (first == "#")
        fields >> keyword;
      else
        keyword = first.substr(1);
      if (keyword != "weights:" && keyword != "weights") continue;
      std::int64_t id;
      double w;
      if (!(fields >> id >> w))
        throw Error(ErrorCode::bad_syntax,
                    "line " + std::to_string(lineno) + ": weight header needs \"u w\"");
      if (!(w > 0.0))
        throw Error(ErrorCode::negative_weight,
                    "node " + std::to_string(id) + " has non-positive weight");
      ids.intern(id);
      weight_entries.emplace_back(id, w);
      continue;
    }
    std::int64_t eu, ev;
    std::istringstream pair(line);
    std::string trailing;
    if (!(pair >> eu >> ev) || (pair >> trailing))
      throw Error(ErrorCode::bad_syntax,
                  "line " + std::to_string(lineno) + ": expected \"u v\", got \"" + line + "\"");
    // Interned one at a time: ids are assigned in order of appearance, and
    // argument evaluation order must not decide it.
    const NodeId du = ids.intern(eu);
    const NodeId dv = ids.intern(ev);
    edges.emplace_back(du, dv);
  }
  if (ids.order().empty())
    throw Error(ErrorCode::bad_syntax, "edge list declares no nodes");

  std::vector<double> weights(ids.order().size(), 1.0);
  for (auto [id, w] : weight_entries) weights[static_cast<std::size_t>(*ids.find(id))] = w;

  return TreeDocument{
      Tree::from_edges(static_cast<NodeId>(ids.order().size()), edges, std::move(weights)),
      ids.order(), std::vector<std::string>(ids.order().size(), "")};
}

}  // namespace detail

inline TreeDocument parse_tree(const std::string& text, TreeFormat format) {
  return format == TreeFormat::json ? detail::parse_tree_json(text)
                                    : detail::parse_tree_edgelist(text);
}

/// Detects the format from the first non-whitespace byte: '{' means JSON.
inline TreeDocument parse_tree_auto(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  const bool json = pos != std::string::npos && text[pos] == '{';
  return parse_tree(text, json ? TreeFormat::json : TreeFormat::edgelist);
}

inline std::string serialize_tree_json(const TreeDocument& doc) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId v = 0; v < doc.tree.size(); ++v) {
    nlohmann::json node{{"id", doc.ids[static_cast<std::size_t>(v)]},
                        {"weight", doc.tree.weight(v)}};
    if (!doc.labels[static_cast<std::size_t>(v)].empty())
      node["label"] = doc.labels[static_cast<std::size_t>(v)];
    nodes.push_back(std::move(node));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : doc.tree.edges())
    edges.push_back({doc.ids[static_cast<std::size_t>(u)], doc.ids[static_cast<std::size_t>(v)]});
  return nlohmann::json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}.dump(2);
}

}  // namespace electree
