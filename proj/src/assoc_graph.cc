// Copyright 2026 The chainattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chainattack/assoc_graph.h"

#include <algorithm>
#include <deque>
#include <sstream>

#include "chainattack/error.h"
#include "chainattack/utf8.h"
#include "json.hpp"

namespace chainattack {
namespace {

using nlohmann::json;

constexpr int kGraphFormatVersion = 1;

struct Generated {
  Rule rule;
  Token token;
};

std::string ReplaceAt(const std::vector<std::string>& chars, size_t pos,
                      std::string_view with) {
  std::string out;
  for (size_t i = 0; i < chars.size(); ++i) out += i == pos ? std::string(with) : chars[i];
  return out;
}

// One expansion step for a node, in rule order.
std::vector<Generated> Generate(const Token& token, const ResourceBundle& bundle,
                                const ExpansionConfig& config, size_t& skipped) {
  std::vector<Generated> out;
  auto take = [&](Rule rule, std::vector<Token> tokens) {
    const size_t cap = config.cap(rule);
    for (size_t i = 0; i < tokens.size() && i < cap; ++i) {
      out.push_back({rule, std::move(tokens[i])});
    }
  };
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCoverage && e.code() != ErrorCode::kPrecondition) {
        throw;
      }
      ++skipped;
    }
  };

  switch (token.kind) {
    case TokenKind::kHanziWord: {
      if (config.enabled(Rule::kTranslation)) {
        take(Rule::kTranslation, Translate(token, bundle));
      }
      if (config.enabled(Rule::kPinyin)) {
        guarded([&] { take(Rule::kPinyin, {PinyinOf(token, bundle)}); });
      }
      const auto chars = SplitCodepoints(token.surface);
      if (config.enabled(Rule::kVisual)) {
        for (size_t i = 0; i < chars.size(); ++i) {
          for (const auto& vn :
               VisualNeighbors(chars[i], config.cap(Rule::kVisual), bundle)) {
            out.push_back({Rule::kVisual,
                           {ReplaceAt(chars, i, vn.character), TokenKind::kHanziWord}});
          }
        }
      }
      if (config.enabled(Rule::kDisassemble)) {
        for (size_t i = 0; i < chars.size(); ++i) {
          if (auto comp = Disassemble(chars[i], bundle)) {
            out.push_back({Rule::kDisassemble,
                           {ReplaceAt(chars, i, comp->surface),
                            TokenKind::kComponentSeq}});
          }
        }
      }
      break;
    }
    case TokenKind::kPinyinSeq: {
      if (config.enabled(Rule::kAcronym) && SplitOnSpaces(token.surface).size() >= 2) {
        take(Rule::kAcronym, {Acronym(token)});
      }
      if (config.enabled(Rule::kHanzify)) {
        guarded([&] {
          take(Rule::kHanzify, Hanzify(token, config.cap(Rule::kHanzify), bundle));
        });
      }
      break;
    }
    case TokenKind::kLatinWord: {
      if (config.enabled(Rule::kTransliteration)) {
        guarded([&] {
          take(Rule::kTransliteration,
               Transliterate(token, config.cap(Rule::kTransliteration), bundle));
        });
      }
      if (config.enabled(Rule::kAcronym) && SplitOnSpaces(token.surface).size() >= 2) {
        take(Rule::kAcronym, {Acronym(token)});
      }
      break;
    }
    case TokenKind::kAcronym: {
      if (config.enabled(Rule::kFuzzy)) {
        guarded([&] {
          take(Rule::kFuzzy, FuzzyExpand(token, config.cap(Rule::kFuzzy), bundle));
        });
      }
      break;
    }
    case TokenKind::kComponentSeq:
    case TokenKind::kOther:
      break;
  }
  return out;
}

[[noreturn]] void GraphParseFail(size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, "graph line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kTranslation: return "translation";
    case Rule::kPinyin: return "pinyin";
    case Rule::kTransliteration: return "transliteration";
    case Rule::kAcronym: return "acronym";
    case Rule::kFuzzy: return "fuzzy";
    case Rule::kHanzify: return "hanzify";
    case Rule::kVisual: return "visual";
    case Rule::kDisassemble: return "disassemble";
  }
  return "unknown";
}

Rule ParseRule(std::string_view name) {
  for (Rule r : kAllRules) {
    if (RuleName(r) == name) return r;
  }
  throw Error(ErrorCode::kParse, "unknown rule '" + std::string(name) + "'");
}

bool RespectsSignature(Rule rule, TokenKind from, TokenKind to) {
  using K = TokenKind;
  switch (rule) {
    case Rule::kTranslation: return from == K::kHanziWord && to == K::kLatinWord;
    case Rule::kPinyin: return from == K::kHanziWord && to == K::kPinyinSeq;
    case Rule::kTransliteration: return from == K::kLatinWord && to == K::kHanziWord;
    case Rule::kAcronym:
      return (from == K::kPinyinSeq || from == K::kLatinWord) && to == K::kAcronym;
    case Rule::kFuzzy: return from == K::kAcronym && to == K::kPinyinSeq;
    case Rule::kHanzify: return from == K::kPinyinSeq && to == K::kHanziWord;
    case Rule::kVisual: return from == K::kHanziWord && to == K::kHanziWord;
    case Rule::kDisassemble: return from == K::kHanziWord && to == K::kComponentSeq;
  }
  return false;
}

ExpansionConfig ExpansionConfig::Defaults() {
  ExpansionConfig c;
  c.max_depth = 3;
  c.fanout_caps = {{Rule::kTranslation, 3}, {Rule::kTransliteration, 3},
                   {Rule::kHanzify, 5},     {Rule::kFuzzy, 10},
                   {Rule::kVisual, 3},      {Rule::kDisassemble, 1},
                   {Rule::kPinyin, 1},      {Rule::kAcronym, 1}};
  c.enabled_rules = std::set<Rule>(std::begin(kAllRules), std::end(kAllRules));
  return c;
}

size_t ExpansionConfig::cap(Rule rule) const {
  auto it = fanout_caps.find(rule);
  return it == fanout_caps.end() ? 0 : it->second;
}

void ExpansionConfig::Validate() const {
  if (max_depth < 1) {
    throw Error(ErrorCode::kPrecondition, "max_depth must be at least 1");
  }
  for (Rule r : enabled_rules) {
    if (cap(r) < 1) {
      throw Error(ErrorCode::kPrecondition,
                  "fanout cap for enabled rule " + std::string(RuleName(r)) +
                      " must be at least 1");
    }
  }
}

NodeId AssocGraph::AddNode(Token token, int depth) {
  auto key = std::make_pair(token.kind, token.surface);
  auto it = index_.find(key);
  if (it != index_.end()) {
    nodes_[it->second].depth = std::min(nodes_[it->second].depth, depth);
    return it->second;
  }
  const NodeId id = nodes_.size();
  nodes_.push_back({std::move(token), depth});
  index_.emplace(std::move(key), id);
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

bool AssocGraph::AddEdge(NodeId from, NodeId to, Rule rule) {
  CheckNode(from);
  CheckNode(to);
  if (from == to) return false;
  if (!edge_set_.emplace(from, to, rule).second) return false;
  out_[from].push_back(edges_.size());
  in_[to].push_back(edges_.size());
  edges_.push_back({from, to, rule});
  return true;
}

void AssocGraph::AddRoot(NodeId id) {
  CheckNode(id);
  if (!is_root(id)) roots_.push_back(id);
}

bool AssocGraph::is_root(NodeId id) const {
  return std::find(roots_.begin(), roots_.end(), id) != roots_.end();
}

std::optional<NodeId> AssocGraph::Find(const Token& token) const {
  auto it = index_.find(std::make_pair(token.kind, token.surface));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> AssocGraph::FindSurface(std::string_view surface) const {
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].token.surface == surface) return id;
  }
  return std::nullopt;
}

const AssocNode& AssocGraph::node(NodeId id) const {
  CheckNode(id);
  return nodes_[id];
}

void AssocGraph::CheckNode(NodeId id) const {
  if (id >= nodes_.size()) {
    throw Error(ErrorCode::kNotFound, "node " + std::to_string(id) + " is not in the graph");
  }
}

std::vector<NodeId> AssocGraph::Neighbors(NodeId id) const {
  CheckNode(id);
  std::vector<NodeId> out;
  auto push = [&](NodeId n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (size_t e : out_[id]) push(edges_[e].to);
  for (size_t e : in_[id]) push(edges_[e].from);
  return out;
}

std::vector<int> AssocGraph::Distances(NodeId from) const {
  CheckNode(from);
  std::vector<int> dist(nodes_.size(), -1);
  std::deque<NodeId> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : Neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

int AssocGraph::LayerDistance(NodeId from, NodeId to) const {
  CheckNode(to);
  const int d = Distances(from)[to];
  if (d < 0) {
    throw Error(ErrorCode::kUnreachable, "no path between " + nodes_[from].token.surface +
                                             " and " + nodes_[to].token.surface);
  }
  return d;
}

std::vector<Rule> AssocGraph::PathRules(NodeId from, NodeId to) const {
  CheckNode(from);
  CheckNode(to);
  std::vector<long> parent_edge(nodes_.size(), -1);
  std::vector<bool> seen(nodes_.size(), false);
  std::deque<NodeId> queue{from};
  seen[from] = true;
  while (!queue.empty() && !seen[to]) {
    const NodeId u = queue.front();
    queue.pop_front();
    auto visit = [&](size_t e, NodeId v) {
      if (!seen[v]) {
        seen[v] = true;
        parent_edge[v] = static_cast<long>(e);
        queue.push_back(v);
      }
    };
    for (size_t e : out_[u]) visit(e, edges_[e].to);
    for (size_t e : in_[u]) visit(e, edges_[e].from);
  }
  if (!seen[to]) {
    throw Error(ErrorCode::kUnreachable, "no path between " + nodes_[from].token.surface +
                                             " and " + nodes_[to].token.surface);
  }
  std::vector<Rule> rules;
  NodeId cur = to;
  while (cur != from) {
    const AssocEdge& e = edges_[static_cast<size_t>(parent_edge[cur])];
    rules.push_back(e.rule);
    cur = e.from == cur ? e.to : e.from;
  }
  std::reverse(rules.begin(), rules.end());
  return rules;
}

std::vector<NodeId> AssocGraph::CandidateSet(NodeId root) const {
  CheckNode(root);
  if (!is_root(root)) {
    throw Error(ErrorCode::kNotFound, nodes_[root].token.surface + " is not a root");
  }
  const auto dist = Distances(root);
  std::vector<NodeId> out;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    if (dist[id] > 0) out.push_back(id);
  }
  std::stable_sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return CodepointLess(nodes_[a].token.surface, nodes_[b].token.surface);
  });
  return out;
}

AssocGraph ExpandWord(const Token& word, const ResourceBundle& bundle,
                      const ExpansionConfig& config, ExpansionStats* stats) {
  config.Validate();
  if (word.kind != TokenKind::kHanziWord || !IsAllHanzi(word.surface)) {
    throw Error(ErrorCode::kPrecondition, "'" + word.surface + "' is not a hanzi word");
  }
  AssocGraph graph(config);
  const NodeId root = graph.AddNode(word, 0);
  graph.AddRoot(root);
  size_t skipped = 0;
  std::deque<NodeId> queue{root};
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    const AssocNode current = graph.node(id);
    if (current.depth >= config.max_depth) continue;
    for (auto& [rule, token] : Generate(current.token, bundle, config, skipped)) {
      const size_t before = graph.nodes().size();
      const NodeId child = graph.AddNode(std::move(token), current.depth + 1);
      graph.AddEdge(id, child, rule);
      if (graph.nodes().size() > before) queue.push_back(child);
    }
  }
  if (stats != nullptr) stats->skipped = skipped;
  return graph;
}

std::string Serialize(const AssocGraph& graph) {
  std::ostringstream out;
  const ExpansionConfig& config = graph.config();
  json caps = json::object();
  for (const auto& [rule, cap] : config.fanout_caps) caps[std::string(RuleName(rule))] = cap;
  json enabled = json::array();
  for (Rule r : config.enabled_rules) enabled.push_back(std::string(RuleName(r)));
  json header = {{"type", "header"},
                 {"version", kGraphFormatVersion},
                 {"max_depth", config.max_depth},
                 {"fanout_caps", caps},
                 {"enabled_rules", enabled},
                 {"roots", graph.roots()},
                 {"node_count", graph.nodes().size()},
                 {"edge_count", graph.edges().size()}};
  out << header.dump() << '\n';
  for (NodeId id = 0; id < graph.nodes().size(); ++id) {
    const AssocNode& n = graph.nodes()[id];
    json rec = {{"type", "node"},
                {"id", id},
                {"surface", n.token.surface},
                {"kind", std::string(TokenKindName(n.token.kind))},
                {"depth", n.depth}};
    if (graph.is_root(id)) rec["root"] = true;
    out << rec.dump() << '\n';
  }
  for (const AssocEdge& e : graph.edges()) {
    json rec = {{"type", "edge"},
                {"from", e.from},
                {"to", e.to},
                {"rule", std::string(RuleName(e.rule))}};
    out << rec.dump() << '\n';
  }
  return out.str();
}

AssocGraph Deserialize(std::string_view text) {
  std::vector<std::pair<size_t, json>> records;
  size_t line_no = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    try {
      records.emplace_back(line_no, json::parse(line));
    } catch (const json::exception& e) {
      GraphParseFail(line_no, std::string("invalid JSON: ") + e.what());
    }
  }
  if (records.empty()) GraphParseFail(1, "missing header");

  size_t current = records.front().first;
  try {
    const auto& [hline, header] = records.front();
    if (header.value("type", "") != "header") GraphParseFail(hline, "first record must be the header");
    if (header.at("version").get<int>() != kGraphFormatVersion) {
      GraphParseFail(hline, "unsupported graph version");
    }
    ExpansionConfig config;
    config.max_depth = header.at("max_depth").get<int>();
    for (const auto& [name, cap] : header.at("fanout_caps").items()) {
      config.fanout_caps[ParseRule(name)] = cap.get<size_t>();
    }
    for (const auto& name : header.at("enabled_rules")) {
      config.enabled_rules.insert(ParseRule(name.get<std::string>()));
    }
    const size_t node_count = header.at("node_count").get<size_t>();
    const size_t edge_count = header.at("edge_count").get<size_t>();

    AssocGraph graph(config);
    size_t edges_seen = 0;
    for (size_t r = 1; r < records.size(); ++r) {
      const auto& [ln, rec] = records[r];
      current = ln;
      const std::string type = rec.at("type").get<std::string>();
      if (type == "node") {
        if (edges_seen > 0) GraphParseFail(ln, "node after edges");
        const size_t id = rec.at("id").get<size_t>();
        if (id != graph.nodes().size()) GraphParseFail(ln, "node ids must be sequential");
        Token token{rec.at("surface").get<std::string>(),
                    ParseTokenKind(rec.at("kind").get<std::string>())};
        const size_t before = graph.nodes().size();
        graph.AddNode(std::move(token), rec.at("depth").get<int>());
        if (graph.nodes().size() == before) GraphParseFail(ln, "duplicate node");
      } else if (type == "edge") {
        ++edges_seen;
        const size_t from = rec.at("from").get<size_t>();
        const size_t to = rec.at("to").get<size_t>();
        if (from >= graph.nodes().size() || to >= graph.nodes().size()) {
          GraphParseFail(ln, "edge references an unknown node");
        }
        const Rule rule = ParseRule(rec.at("rule").get<std::string>());
        if (!RespectsSignature(rule, graph.node(from).token.kind, graph.node(to).token.kind)) {
          GraphParseFail(ln, "edge violates the signature of rule " + std::string(RuleName(rule)));
        }
        if (!graph.AddEdge(from, to, rule)) GraphParseFail(ln, "duplicate edge");
      } else {
        GraphParseFail(ln, "unknown record type '" + type + "'");
      }
    }
    const size_t last = records.back().first;
    current = hline;
    if (graph.nodes().size() != node_count || graph.edges().size() != edge_count) {
      GraphParseFail(last, "expected " + std::to_string(node_count) + " nodes and " +
                               std::to_string(edge_count) + " edges, found " +
                               std::to_string(graph.nodes().size()) + " and " +
                               std::to_string(graph.edges().size()) + " (truncated?)");
    }
    for (const auto& root : header.at("roots")) {
      const size_t id = root.get<size_t>();
      if (id >= graph.nodes().size()) GraphParseFail(hline, "root id out of range");
      graph.AddRoot(id);
    }
    return graph;
  } catch (const json::exception& e) {
    GraphParseFail(current, std::string("malformed record: ") + e.what());
  } catch (const Error& e) {
    if (std::string_view(e.what()).starts_with("parse: graph line")) throw;
    GraphParseFail(current, e.what());
  }
}

AssocGraph Merge(std::span<const AssocGraph> graphs) {
  if (graphs.empty()) return AssocGraph();
  AssocGraph merged(graphs.front().config());
  for (const AssocGraph& g : graphs) {
    std::vector<NodeId> remap(g.nodes().size());
    for (NodeId id = 0; id < g.nodes().size(); ++id) {
      remap[id] = merged.AddNode(g.nodes()[id].token, g.nodes()[id].depth);
    }
    for (const AssocEdge& e : g.edges()) merged.AddEdge(remap[e.from], remap[e.to], e.rule);
    for (NodeId r : g.roots()) merged.AddRoot(remap[r]);
  }
  return merged;
}

}  // namespace chainattack
