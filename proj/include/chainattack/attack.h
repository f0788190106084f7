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

#ifndef CHAINATTACK_ATTACK_H_
#define CHAINATTACK_ATTACK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "chainattack/assoc_graph.h"
#include "chainattack/lexicon.h"
#include "chainattack/rng.h"
#include "chainattack/victim.h"

namespace chainattack {

struct PsoConfig {
  int swarm_size = 10;
  int t_max = 20;
  double omega_max = 0.8;
  double omega_min = 0.2;
  double p_min = 0.2;
  double p_max = 0.8;
  double phi1 = 2.0;
  double phi2 = 2.0;
  uint64_t seed = 1;
  bool early_stop = false;
  double target_fraction = 1.0 / 3.0;

  // Throws Error(kPrecondition).
  void Validate() const;
};

// Inertia weight and move-to-global-best probability at iteration t.
double Omega(int t, const PsoConfig& config);
double MoveProbability(int t, const PsoConfig& config);

double Sigmoid(double x);

// Concatenates surfaces, with a space only where two ASCII letters or digits
// would otherwise touch.
std::string RenderTokens(const std::vector<Token>& tokens);

struct Importance {
  size_t index = 0;
  double importance = 0.0;
};

// C(x) - C(x without token n) for every n, sorted descending with ties by
// index. Makes exactly tokens.size() + 1 oracle calls; the prediction on the
// full sentence is stored in `clean` when given.
std::vector<Importance> WordImportance(const std::vector<Token>& tokens, int true_label,
                                       const VictimOracle& oracle,
                                       Prediction* clean = nullptr);

// Top ceil(n * fraction) indices by importance, then those with candidates,
// returned in ascending index order.
std::vector<size_t> SelectTargets(const std::vector<Importance>& importances, size_t n,
                                  double fraction,
                                  const std::vector<bool>& has_candidates);

struct TargetSlot {
  size_t index = 0;
  AssocGraph graph;
  NodeId root = 0;
  // Candidate set of the root.
  std::vector<NodeId> candidates;
  // Depth-one associates used to seed particles.
  std::vector<NodeId> direct;
  // Undirected hop count from the root for every node.
  std::vector<int> distance;
};

// Builds a slot from a graph whose first root is the original token.
TargetSlot MakeTargetSlot(size_t index, AssocGraph graph);

struct SentenceState {
  std::vector<Token> tokens;
  int true_label = 0;
  std::vector<TargetSlot> targets;
};

// Expands every hanzi token among the chosen targets. Tokens without
// candidates are dropped from the target list.
SentenceState PrepareSentence(const std::vector<Token>& tokens, int true_label,
                              const std::vector<Importance>& importances,
                              const ResourceBundle& bundle,
                              const ExpansionConfig& graph_config, double fraction);

// One node id per target slot; the slot root means "unchanged".
using Position = std::vector<NodeId>;

struct Particle {
  Position position;
  std::vector<double> velocity;
  Position best_position;
  double best_score = 0.0;
};

size_t SubstitutionCount(const Position& position, const SentenceState& state);
std::vector<Token> ApplyPosition(const Position& position, const SentenceState& state);
// Sum of layer distances over substituted dimensions.
int TotalLayers(const Position& position, const SentenceState& state);

struct Evaluation {
  double score = 0.0;
  double confidence = 0.0;
  int label = 0;
  int layers = 0;
};

// (1 - C) / L. Throws Error(kInvalidPosition) when nothing is substituted.
Evaluation EvaluatePosition(const Position& position, const SentenceState& state,
                            const VictimOracle& oracle);
double ScorePosition(const Position& position, const SentenceState& state,
                     const VictimOracle& oracle);

std::vector<double> UpdateVelocity(const Particle& particle, const Position& global_best,
                                   int t, const PsoConfig& config);

// Draws r1 and r2 per dimension; when r2 < v_n the dimension copies the global
// best (r1 < p) or steps to a random graph neighbour. Walks that would leave
// nothing substituted are redrawn up to eight times; if the finished update
// still substitutes nothing, the old position is kept.
Position UpdatePosition(const Particle& particle, const Position& global_best, double p,
                        const SentenceState& state, Rng& rng);

struct PsoRun {
  Position best;
  Evaluation evaluation;
  // Global-best score after initialisation and after each iteration.
  std::vector<double> history;
  int iterations = 0;
  // Oracle calls; repeated texts are answered from a per-run cache.
  size_t queries = 0;
};

// Throws Error(kNoCandidates) when no target has candidates.
PsoRun RunPso(const SentenceState& state, const VictimOracle& oracle,
              const PsoConfig& config);

// Scores every position of the search space. Throws Error(kNoCandidates) or
// Error(kPrecondition) when the space exceeds 1e5 positions.
PsoRun BruteForce(const SentenceState& state, const VictimOracle& oracle);

struct Substitution {
  size_t index = 0;
  std::string from;
  std::string to;
  TokenKind kind = TokenKind::kHanziWord;
  std::vector<Rule> rules;
};

enum class AttackStatus { kAttacked, kNoCandidates };

struct AttackResult {
  AttackStatus status = AttackStatus::kAttacked;
  std::vector<Token> original;
  std::vector<Token> adversarial;
  int true_label = 0;
  double original_confidence = 0.0;
  int original_label = 0;
  bool success = false;
  double score = 0.0;
  double confidence = 0.0;
  int label = 0;
  int layers = 0;
  std::vector<Substitution> substitutions;
  size_t queries = 0;
  int iterations = 0;
  std::vector<double> history;
};

AttackResult MakeResult(const SentenceState& state, const PsoRun& run);

// Full pipeline on one sentence: importance, targets, graphs, swarm search.
// A sentence without candidates yields status kNoCandidates. Oracle errors
// propagate.
AttackResult PsoAttack(const std::vector<Token>& tokens, int true_label,
                       const VictimOracle& oracle, const ResourceBundle& bundle,
                       const ExpansionConfig& graph_config, const PsoConfig& config);

}  // namespace chainattack

#endif  // CHAINATTACK_ATTACK_H_
