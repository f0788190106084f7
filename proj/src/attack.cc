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

#include "chainattack/attack.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "chainattack/error.h"
#include "chainattack/utf8.h"

namespace chainattack {
namespace {

constexpr int kWalkAttempts = 9;
constexpr double kBruteForceLimit = 1e5;

bool EndsAlnum(const std::string& s) {
  return !s.empty() && s.back() >= 0 && IsAsciiAlnum(static_cast<char32_t>(s.back()));
}

bool StartsAlnum(const std::string& s) {
  return !s.empty() && s.front() >= 0 && IsAsciiAlnum(static_cast<char32_t>(s.front()));
}

// Caches predictions by rendered text so that revisited positions cost no
// extra queries.
class CachedEvaluator {
 public:
  CachedEvaluator(const SentenceState& state, const VictimOracle& oracle)
      : state_(state), oracle_(oracle) {}

  Evaluation Evaluate(const Position& position) {
    if (SubstitutionCount(position, state_) == 0) {
      throw Error(ErrorCode::kInvalidPosition, "position substitutes nothing");
    }
    const std::string text = RenderTokens(ApplyPosition(position, state_));
    auto it = cache_.find(text);
    if (it == cache_.end()) {
      it = cache_.emplace(text, oracle_.Predict(text)).first;
      ++queries_;
    }
    const Prediction& p = it->second;
    if (state_.true_label < 0 ||
        static_cast<size_t>(state_.true_label) >= p.confidences.size()) {
      throw Error(ErrorCode::kOutOfRange, "true label outside the oracle's classes");
    }
    Evaluation e;
    e.confidence = p.confidences[static_cast<size_t>(state_.true_label)];
    e.label = p.label;
    e.layers = TotalLayers(position, state_);
    e.score = (1.0 - e.confidence) / e.layers;
    return e;
  }

  size_t queries() const { return queries_; }

 private:
  const SentenceState& state_;
  const VictimOracle& oracle_;
  std::map<std::string, Prediction> cache_;
  size_t queries_ = 0;
};

}  // namespace

void PsoConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kPrecondition, "invalid PSO config: " + what);
  };
  if (swarm_size < 1) fail("swarm size must be positive");
  if (t_max < 1) fail("t_max must be at least 1");
  if (!(0.0 < p_min && p_min < p_max && p_max < 1.0)) fail("need 0 < P_min < P_max < 1");
  if (!(0.0 <= omega_min && omega_min <= omega_max)) fail("need 0 <= omega_min <= omega_max");
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) fail("target fraction must be in (0, 1]");
}

double Omega(int t, const PsoConfig& config) {
  const double tt = static_cast<double>(t) * t;
  const double tm = static_cast<double>(config.t_max) * config.t_max;
  return config.omega_max - tt * (config.omega_max - config.omega_min) / tm;
}

double MoveProbability(int t, const PsoConfig& config) {
  const double tt = static_cast<double>(t) * t;
  const double tm = static_cast<double>(config.t_max) * config.t_max;
  return config.p_min + tt * (config.p_max - config.p_min) / tm;
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string RenderTokens(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (EndsAlnum(out) && StartsAlnum(t.surface)) out += ' ';
    out += t.surface;
  }
  return out;
}

std::vector<Importance> WordImportance(const std::vector<Token>& tokens, int true_label,
                                       const VictimOracle& oracle, Prediction* clean) {
  if (tokens.empty()) throw Error(ErrorCode::kPrecondition, "cannot rank an empty sentence");
  Prediction full = oracle.Predict(RenderTokens(tokens));
  if (true_label < 0 || static_cast<size_t>(true_label) >= full.confidences.size()) {
    throw Error(ErrorCode::kOutOfRange, "true label outside the oracle's classes");
  }
  const double base = full.confidences[static_cast<size_t>(true_label)];
  if (clean != nullptr) *clean = std::move(full);
  std::vector<Importance> out;
  out.reserve(tokens.size());
  for (size_t n = 0; n < tokens.size(); ++n) {
    std::vector<Token> rest = tokens;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(n));
    out.push_back({n, base - ConfidenceTrue(oracle, RenderTokens(rest), true_label)});
  }
  std::stable_sort(out.begin(), out.end(), [](const Importance& a, const Importance& b) {
    return a.importance > b.importance;
  });
  return out;
}

std::vector<size_t> SelectTargets(const std::vector<Importance>& importances, size_t n,
                                  double fraction,
                                  const std::vector<bool>& has_candidates) {
  const auto budget = static_cast<size_t>(std::ceil(static_cast<double>(n) * fraction - 1e-12));
  std::vector<size_t> out;
  for (size_t i = 0; i < importances.size() && i < budget; ++i) {
    const size_t index = importances[i].index;
    if (index < has_candidates.size() && has_candidates[index]) out.push_back(index);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TargetSlot MakeTargetSlot(size_t index, AssocGraph graph) {
  if (graph.roots().empty()) throw Error(ErrorCode::kPrecondition, "graph has no root");
  TargetSlot slot;
  slot.index = index;
  slot.root = graph.roots().front();
  slot.candidates = graph.CandidateSet(slot.root);
  slot.distance = graph.Distances(slot.root);
  for (NodeId id : slot.candidates) {
    if (slot.distance[id] == 1) slot.direct.push_back(id);
  }
  slot.graph = std::move(graph);
  return slot;
}

SentenceState PrepareSentence(const std::vector<Token>& tokens, int true_label,
                              const std::vector<Importance>& importances,
                              const ResourceBundle& bundle,
                              const ExpansionConfig& graph_config, double fraction) {
  SentenceState state;
  state.tokens = tokens;
  state.true_label = true_label;

  const auto budget =
      static_cast<size_t>(std::ceil(static_cast<double>(tokens.size()) * fraction - 1e-12));
  std::vector<bool> has_candidates(tokens.size(), false);
  std::map<size_t, TargetSlot> slots;
  for (size_t i = 0; i < importances.size() && i < budget; ++i) {
    const size_t index = importances[i].index;
    if (tokens[index].kind != TokenKind::kHanziWord) continue;
    TargetSlot slot = MakeTargetSlot(index, ExpandWord(tokens[index], bundle, graph_config));
    if (slot.candidates.empty()) continue;
    has_candidates[index] = true;
    slots.emplace(index, std::move(slot));
  }
  for (size_t index : SelectTargets(importances, tokens.size(), fraction, has_candidates)) {
    state.targets.push_back(std::move(slots.at(index)));
  }
  return state;
}

size_t SubstitutionCount(const Position& position, const SentenceState& state) {
  size_t count = 0;
  for (size_t d = 0; d < position.size(); ++d) {
    if (position[d] != state.targets[d].root) ++count;
  }
  return count;
}

std::vector<Token> ApplyPosition(const Position& position, const SentenceState& state) {
  if (position.size() != state.targets.size()) {
    throw Error(ErrorCode::kInvalidPosition, "position has the wrong dimension");
  }
  std::vector<Token> out = state.tokens;
  for (size_t d = 0; d < position.size(); ++d) {
    const TargetSlot& slot = state.targets[d];
    out[slot.index] = slot.graph.node(position[d]).token;
  }
  return out;
}

int TotalLayers(const Position& position, const SentenceState& state) {
  int total = 0;
  for (size_t d = 0; d < position.size(); ++d) {
    const TargetSlot& slot = state.targets[d];
    if (position[d] == slot.root) continue;
    const int dist = slot.distance.at(position[d]);
    if (dist < 0) throw Error(ErrorCode::kInvalidPosition, "position leaves the candidate set");
    total += dist;
  }
  return total;
}

Evaluation EvaluatePosition(const Position& position, const SentenceState& state,
                            const VictimOracle& oracle) {
  CachedEvaluator evaluator(state, oracle);
  return evaluator.Evaluate(position);
}

double ScorePosition(const Position& position, const SentenceState& state,
                     const VictimOracle& oracle) {
  return EvaluatePosition(position, state, oracle).score;
}

std::vector<double> UpdateVelocity(const Particle& particle, const Position& global_best,
                                   int t, const PsoConfig& config) {
  const double omega = Omega(t, config);
  std::vector<double> v(particle.velocity.size());
  for (size_t n = 0; n < v.size(); ++n) {
    const double ip = particle.best_position[n] == particle.position[n] ? -1.0 : 1.0;
    const double ig = global_best[n] == particle.position[n] ? -1.0 : 1.0;
    v[n] = Sigmoid(omega * particle.velocity[n] + config.phi1 * ip + config.phi2 * ig);
  }
  return v;
}

Position UpdatePosition(const Particle& particle, const Position& global_best, double p,
                        const SentenceState& state, Rng& rng) {
  Position x = particle.position;
  for (size_t n = 0; n < x.size(); ++n) {
    const double r1 = rng.Uniform();
    const double r2 = rng.Uniform();
    if (r2 >= particle.velocity[n]) continue;
    const TargetSlot& slot = state.targets[n];
    const NodeId current = x[n];
    if (r1 < p) {
      x[n] = global_best[n];
      continue;
    }
    const std::vector<NodeId> adjacent = slot.graph.Neighbors(current);
    if (adjacent.empty()) continue;
    for (int attempt = 0; attempt < kWalkAttempts; ++attempt) {
      x[n] = adjacent[rng.Index(adjacent.size())];
      if (SubstitutionCount(x, state) > 0) break;
      x[n] = current;
    }
  }
  if (SubstitutionCount(x, state) == 0) return particle.position;
  return x;
}

PsoRun RunPso(const SentenceState& state, const VictimOracle& oracle,
              const PsoConfig& config) {
  config.Validate();
  if (state.targets.empty()) throw Error(ErrorCode::kNoCandidates, "no target has candidates");
  const size_t dims = state.targets.size();
  CachedEvaluator evaluator(state, oracle);

  std::vector<Rng> rngs;
  std::vector<Particle> swarm(static_cast<size_t>(config.swarm_size));
  for (size_t i = 0; i < swarm.size(); ++i) {
    rngs.emplace_back(SplitSeed(config.seed, i));
    Rng& rng = rngs.back();
    Particle& particle = swarm[i];
    for (size_t n = 0; n < dims; ++n) {
      const TargetSlot& slot = state.targets[n];
      particle.position.push_back(slot.direct[rng.Index(slot.direct.size())]);
    }
    for (size_t n = 0; n < dims; ++n) particle.velocity.push_back(rng.Uniform());
  }

  PsoRun run;
  bool have_best = false;
  bool stop = false;
  auto consider = [&](Particle& particle, const Evaluation& e, bool initial) {
    if (initial || e.score > particle.best_score) {
      particle.best_score = e.score;
      particle.best_position = particle.position;
    }
    if (config.early_stop && e.label != state.true_label) {
      run.best = particle.position;
      run.evaluation = e;
      have_best = true;
      stop = true;
    }
  };

  std::vector<Evaluation> evals(swarm.size());
  for (size_t i = 0; i < swarm.size() && !stop; ++i) {
    evals[i] = evaluator.Evaluate(swarm[i].position);
    consider(swarm[i], evals[i], true);
  }
  auto refresh_global = [&]() {
    if (stop) return;
    for (size_t i = 0; i < swarm.size(); ++i) {
      if (!have_best || swarm[i].best_score > run.evaluation.score) {
        run.best = swarm[i].best_position;
        run.evaluation = evaluator.Evaluate(run.best);
        have_best = true;
      }
    }
  };
  refresh_global();
  run.history.push_back(run.evaluation.score);

  for (int t = 1; t <= config.t_max && !stop; ++t) {
    const double p = MoveProbability(t, config);
    for (size_t i = 0; i < swarm.size() && !stop; ++i) {
      Particle& particle = swarm[i];
      particle.velocity = UpdateVelocity(particle, run.best, t, config);
      particle.position = UpdatePosition(particle, run.best, p, state, rngs[i]);
      consider(particle, evaluator.Evaluate(particle.position), false);
    }
    refresh_global();
    run.history.push_back(run.evaluation.score);
    run.iterations = t;
  }
  run.queries = evaluator.queries();
  return run;
}

PsoRun BruteForce(const SentenceState& state, const VictimOracle& oracle) {
  if (state.targets.empty()) throw Error(ErrorCode::kNoCandidates, "no target has candidates");
  double space = 1.0;
  for (const TargetSlot& slot : state.targets) {
    space *= static_cast<double>(slot.candidates.size() + 1);
  }
  if (space - 1.0 > kBruteForceLimit) {
    throw Error(ErrorCode::kPrecondition, "search space too large for enumeration");
  }
  CachedEvaluator evaluator(state, oracle);
  const size_t dims = state.targets.size();
  std::vector<size_t> digit(dims, 0);
  PsoRun run;
  bool have_best = false;
  while (true) {
    Position x(dims);
    for (size_t n = 0; n < dims; ++n) {
      const TargetSlot& slot = state.targets[n];
      x[n] = digit[n] == 0 ? slot.root : slot.candidates[digit[n] - 1];
    }
    if (SubstitutionCount(x, state) > 0) {
      const Evaluation e = evaluator.Evaluate(x);
      if (!have_best || e.score > run.evaluation.score) {
        run.best = x;
        run.evaluation = e;
        have_best = true;
      }
    }
    size_t n = 0;
    while (n < dims && ++digit[n] > state.targets[n].candidates.size()) digit[n++] = 0;
    if (n == dims) break;
  }
  run.history.push_back(run.evaluation.score);
  run.queries = evaluator.queries();
  return run;
}

AttackResult MakeResult(const SentenceState& state, const PsoRun& run) {
  AttackResult r;
  r.original = state.tokens;
  r.true_label = state.true_label;
  r.adversarial = ApplyPosition(run.best, state);
  r.score = run.evaluation.score;
  r.confidence = run.evaluation.confidence;
  r.label = run.evaluation.label;
  r.layers = run.evaluation.layers;
  r.success = r.label != state.true_label;
  r.iterations = run.iterations;
  r.history = run.history;
  r.queries = run.queries;
  for (size_t n = 0; n < run.best.size(); ++n) {
    const TargetSlot& slot = state.targets[n];
    if (run.best[n] == slot.root) continue;
    const Token& to = slot.graph.node(run.best[n]).token;
    r.substitutions.push_back({slot.index, state.tokens[slot.index].surface, to.surface,
                               to.kind, slot.graph.PathRules(slot.root, run.best[n])});
  }
  return r;
}

AttackResult PsoAttack(const std::vector<Token>& tokens, int true_label,
                       const VictimOracle& oracle, const ResourceBundle& bundle,
                       const ExpansionConfig& graph_config, const PsoConfig& config) {
  config.Validate();
  CountingOracle counter(oracle);
  Prediction clean;
  const std::vector<Importance> importances =
      WordImportance(tokens, true_label, counter, &clean);
  SentenceState state =
      PrepareSentence(tokens, true_label, importances, bundle, graph_config,
                      config.target_fraction);

  AttackResult result;
  if (state.targets.empty()) {
    result.status = AttackStatus::kNoCandidates;
    result.original = tokens;
    result.adversarial = tokens;
    result.true_label = true_label;
    result.label = clean.label;
    result.confidence = clean.confidences.at(static_cast<size_t>(true_label));
  } else {
    result = MakeResult(state, RunPso(state, counter, config));
  }
  result.original_label = clean.label;
  result.original_confidence = clean.confidences.at(static_cast<size_t>(true_label));
  result.success = result.label != true_label;
  result.queries = counter.count();
  return result;
}

}  // namespace chainattack
