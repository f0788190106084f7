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

#ifndef CHAINATTACK_ASSOC_GRAPH_H_
#define CHAINATTACK_ASSOC_GRAPH_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "chainattack/lexicon.h"

namespace chainattack {

// Association rules, in the order expansion applies them.
enum class Rule {
  kTranslation,
  kPinyin,
  kTransliteration,
  kAcronym,
  kFuzzy,
  kHanzify,
  kVisual,
  kDisassemble,
};

inline constexpr Rule kAllRules[] = {
    Rule::kTranslation, Rule::kPinyin, Rule::kTransliteration, Rule::kAcronym,
    Rule::kFuzzy,       Rule::kHanzify, Rule::kVisual,         Rule::kDisassemble};

std::string_view RuleName(Rule rule);
Rule ParseRule(std::string_view name);

// Source/target kinds each rule may connect.
bool RespectsSignature(Rule rule, TokenKind from, TokenKind to);

using NodeId = std::size_t;

struct AssocNode {
  Token token;
  int depth = 0;

  friend bool operator==(const AssocNode&, const AssocNode&) = default;
};

struct AssocEdge {
  NodeId from = 0;
  NodeId to = 0;
  Rule rule = Rule::kTranslation;

  friend bool operator==(const AssocEdge&, const AssocEdge&) = default;
};

struct ExpansionConfig {
  int max_depth = 3;
  std::map<Rule, size_t> fanout_caps;
  std::set<Rule> enabled_rules;

  // max_depth 3, every rule enabled, default caps.
  static ExpansionConfig Defaults();
  size_t cap(Rule rule) const;
  bool enabled(Rule rule) const { return enabled_rules.count(rule) > 0; }
  // Throws Error(kPrecondition).
  void Validate() const;

  friend bool operator==(const ExpansionConfig&, const ExpansionConfig&) = default;
};

class AssocGraph {
 public:
  AssocGraph() : config_(ExpansionConfig::Defaults()) {}
  explicit AssocGraph(ExpansionConfig config) : config_(std::move(config)) {}

  // Returns the existing id when (surface, kind) is already present; the
  // stored depth becomes the minimum of the two.
  NodeId AddNode(Token token, int depth);
  // False when the edge already exists or is a self-loop.
  bool AddEdge(NodeId from, NodeId to, Rule rule);
  void AddRoot(NodeId id);

  std::optional<NodeId> Find(const Token& token) const;
  // First node (by id) with this surface, of any kind.
  std::optional<NodeId> FindSurface(std::string_view surface) const;

  const AssocNode& node(NodeId id) const;
  const std::vector<AssocNode>& nodes() const { return nodes_; }
  const std::vector<AssocEdge>& edges() const { return edges_; }
  const std::vector<NodeId>& roots() const { return roots_; }
  const ExpansionConfig& config() const { return config_; }
  bool is_root(NodeId id) const;

  // Undirected adjacency: out-neighbours then in-neighbours, each in edge
  // insertion order, without repeats. Throws Error(kNotFound).
  std::vector<NodeId> Neighbors(NodeId id) const;

  // Undirected BFS hop counts from `from`; -1 where unreachable.
  std::vector<int> Distances(NodeId from) const;

  // Throws Error(kNotFound) or Error(kUnreachable).
  int LayerDistance(NodeId from, NodeId to) const;

  // Rules along one shortest undirected path (BFS, lowest ids first).
  std::vector<Rule> PathRules(NodeId from, NodeId to) const;

  // Every node reachable from `root` except the root itself, ordered by
  // (distance, surface). Throws Error(kNotFound) if `root` is not a root.
  std::vector<NodeId> CandidateSet(NodeId root) const;

  friend bool operator==(const AssocGraph& a, const AssocGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ &&
           a.roots_ == b.roots_ && a.config_ == b.config_;
  }

 private:
  void CheckNode(NodeId id) const;

  std::vector<AssocNode> nodes_;
  std::vector<AssocEdge> edges_;
  std::vector<NodeId> roots_;
  ExpansionConfig config_;
  std::map<std::pair<TokenKind, std::string>, NodeId> index_;
  std::set<std::tuple<NodeId, NodeId, Rule>> edge_set_;
  // Edge indices per node.
  std::vector<std::vector<size_t>> out_;
  std::vector<std::vector<size_t>> in_;
};

// BFS expansion from a hanzi word. Lexicon coverage failures skip the rule
// for that node. Throws Error(kPrecondition) if `word` is not a hanzi word.
struct ExpansionStats {
  // Rule applications skipped because the lexicon lacked coverage.
  size_t skipped = 0;
};

AssocGraph ExpandWord(const Token& word, const ResourceBundle& bundle,
                      const ExpansionConfig& config,
                      ExpansionStats* stats = nullptr);

// JSON lines: a header with the config and counts, one line per node, then
// one line per edge.
std::string Serialize(const AssocGraph& graph);
// Throws Error(kParse) naming the offending line.
AssocGraph Deserialize(std::string_view text);

// Union keyed by (surface, kind); depths are the minimum over inputs and
// roots are concatenated in input order. The first graph's config is kept.
AssocGraph Merge(std::span<const AssocGraph> graphs);

}  // namespace chainattack

#endif  // CHAINATTACK_ASSOC_GRAPH_H_
