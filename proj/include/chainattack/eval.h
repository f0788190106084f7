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

#ifndef CHAINATTACK_EVAL_H_
#define CHAINATTACK_EVAL_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chainattack/attack.h"
#include "chainattack/lexicon.h"
#include "chainattack/victim.h"

namespace chainattack {

struct TransportPlan {
  double cost = 0.0;
  // flow[i][j] moved from source i to target j.
  std::vector<std::vector<double>> flow;
};

// Exact balanced transport by successive shortest paths. Both weight vectors
// must be nonnegative with equal sums; costs nonnegative.
TransportPlan SolveTransport(const std::vector<double>& source,
                             const std::vector<double>& target,
                             const std::vector<std::vector<double>>& cost);

struct Nbow {
  std::vector<std::string> tokens;
  std::vector<double> weights;
  std::vector<std::vector<double>> vectors;
  size_t dropped = 0;
};

// Normalized bag of words over tokens with an embedding (direct or averaged
// over characters); the others are counted as dropped.
Nbow MakeNbow(const std::vector<std::string>& tokens, const Embeddings& embeddings);

struct WmdResult {
  double distance = 0.0;
  size_t dropped_a = 0;
  size_t dropped_b = 0;
};

// Throws Error(kUndefinedDistance) when a side has no embedded token.
WmdResult Wmd(const std::vector<std::string>& a, const std::vector<std::string>& b,
              const Embeddings& embeddings);
WmdResult Wmd(const std::vector<Token>& a, const std::vector<Token>& b,
              const Embeddings& embeddings);

double EuclideanDistance(const std::vector<double>& u, const std::vector<double>& v);

// Throws Error(kInvalidEvaluation) on an empty dataset.
double Accuracy(const VictimOracle& oracle, const std::vector<LabeledExample>& examples);
double Accuracy(const VictimOracle& oracle, const LabeledDataset& dataset);

struct EvalRow {
  std::string model;
  size_t examples = 0;
  double clean_acc = 0.0;
  double attacked_acc = 0.0;
  size_t successes = 0;
  // Mean over successful pairs with a defined distance; nullopt when none.
  std::optional<double> mean_wmd;
  size_t wmd_undefined = 0;
  double mean_queries = 0.0;
};

using ExampleAttacker = std::function<AttackResult(const LabeledExample& example, size_t index)>;

struct AttackEvalOutput {
  EvalRow row;
  std::vector<size_t> indices;
  std::vector<AttackResult> results;
};

// Runs `attacker` on the examples labelled `attacked_label` (all examples when
// negative) and re-queries the oracle on every output. `jobs` worker threads
// process examples; results keep dataset order.
AttackEvalOutput AttackEval(const std::string& model, const VictimOracle& oracle,
                            const LabeledDataset& dataset, int attacked_label,
                            const ExampleAttacker& attacker, const Embeddings& embeddings,
                            int jobs = 1);

// Row from finished attacks, using the labels the attacker observed.
EvalRow SummarizeAttacks(const std::string& model, const std::vector<AttackResult>& results,
                         const Embeddings& embeddings);

std::string EvalRowTsvHeader();
std::string EvalRowTsv(const EvalRow& row);

struct NamedOracle {
  std::string name;
  const VictimOracle* oracle = nullptr;
};

struct AdversarialSet {
  std::string source;
  std::vector<LabeledExample> examples;
};

// cells[s][t] is the accuracy of target t on the set crafted against source
// s, nullopt where they are the same model.
struct TransferTable {
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  std::vector<std::vector<std::optional<double>>> cells;
};

TransferTable TransferMatrix(const std::vector<AdversarialSet>& sets,
                             const std::vector<NamedOracle>& targets);

// Header row of target names; "N/A" on the diagonal.
std::string TransferTsv(const TransferTable& table);

// Calls fn(i) for i in [0, n) on up to `jobs` threads.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace chainattack

#endif  // CHAINATTACK_EVAL_H_
