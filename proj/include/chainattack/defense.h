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

#ifndef CHAINATTACK_DEFENSE_H_
#define CHAINATTACK_DEFENSE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainattack/assoc_graph.h"
#include "chainattack/lexicon.h"
#include "chainattack/victim.h"

namespace chainattack {

struct Replacement {
  size_t position = 0;
  std::string abnormal;
  std::string chosen;
  int distance = 0;
};

struct RecoveryReport {
  std::vector<Token> recovered;
  std::vector<Replacement> replacements;
  std::vector<size_t> unresolved;
};

// Defender-side inverse of the association rules, built from the bundle
// alone. Walking it from a perturbed surface leads back towards the
// vocabulary words it may have come from.
class RecoveryIndex {
 public:
  static constexpr int kDefaultMaxDepth = 3;

  explicit RecoveryIndex(const ResourceBundle& bundle,
                         const ExpansionConfig& config = ExpansionConfig::Defaults(),
                         int max_depth = kDefaultMaxDepth);

  // Tokens one inverse rule application away, deduplicated, in a fixed order.
  std::vector<Token> Predecessors(const Token& token) const;

  // Nearest in-vocabulary word and its distance, ties by frequency then
  // code point; nullopt when none lies within max_depth.
  std::optional<std::pair<std::string, int>> Nearest(const Token& token) const;

  const ResourceBundle& bundle() const { return bundle_; }
  int max_depth() const { return max_depth_; }

 private:
  void AddHanziPredecessors(const std::string& surface, std::vector<Token>& out) const;

  const ResourceBundle& bundle_;
  int max_depth_;
  std::map<std::string, std::vector<std::string>, std::less<>> reverse_visual_;
  std::map<std::string, std::vector<std::string>, std::less<>> reverse_pinyin_;
  std::map<std::string, std::vector<std::string>, std::less<>> reverse_translit_;
  std::map<std::string, std::vector<std::string>, std::less<>> reverse_translation_;
  std::map<std::string, std::vector<Token>, std::less<>> reverse_acronym_;
};

// Positions holding an out-of-vocabulary token with at least one inverse
// predecessor.
std::vector<size_t> DetectAbnormal(const std::vector<Token>& tokens,
                                   const RecoveryIndex& index);
RecoveryReport AgbrRecover(const std::vector<Token>& tokens, const RecoveryIndex& index);

// Same contract against an explicit graph: abnormal tokens are non-root nodes
// absent from the vocabulary, recovered to the closest in-vocabulary node.
std::vector<size_t> DetectAbnormal(const std::vector<Token>& tokens, const AssocGraph& graph,
                                   const Vocabulary& vocab);
RecoveryReport AgbrRecover(const std::vector<Token>& tokens, const AssocGraph& graph,
                           const Vocabulary& vocab);

struct AugmentationPlan {
  double fraction = 0.0;
  int attacked_label = 1;
  uint64_t seed = 1;
};

// Returns the perturbed text for a successful attack, nullopt otherwise.
using Attacker =
    std::function<std::optional<std::string>(const LabeledExample& example, size_t index)>;

struct AugmentationResult {
  LabeledDataset dataset;
  std::vector<size_t> selected;
  size_t replaced = 0;
};

// Replaces floor(fraction * |attacked class|) seeded-sampled examples with
// their successful attacker outputs. Throws Error(kPrecondition) or
// Error(kInvalidDataset).
AugmentationResult Augment(const LabeledDataset& dataset, const AugmentationPlan& plan,
                           const Attacker& attacker);

struct TokenizedExample {
  std::vector<Token> tokens;
  int label = 0;
};

using TokenClassifier = std::function<int(const std::vector<Token>&)>;

TokenClassifier OracleClassifier(const VictimOracle& oracle);
TokenClassifier RecoveringClassifier(const VictimOracle& oracle, const RecoveryIndex& index);

double TokenAccuracy(const TokenClassifier& classifier,
                     const std::vector<TokenizedExample>& examples);

struct ShieldResult {
  double adv_before = 0.0;
  double adv_after = 0.0;
  double all_before = 0.0;
  double all_after = 0.0;
  double delta_adv = 0.0;
  double delta_all = 0.0;
};

// Throws Error(kInvalidEvaluation) when either set is empty.
ShieldResult ShieldEval(const TokenClassifier& before, const TokenClassifier& after,
                        const std::vector<TokenizedExample>& clean_test,
                        const std::vector<TokenizedExample>& perturbed_test);

}  // namespace chainattack

#endif  // CHAINATTACK_DEFENSE_H_
