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

#include "chainattack/defense.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "chainattack/attack.h"
#include "chainattack/error.h"
#include "chainattack/rng.h"
#include "chainattack/utf8.h"

namespace chainattack {
namespace {

constexpr size_t kMaxVisited = 50000;

void SortUnique(std::map<std::string, std::vector<std::string>, std::less<>>& m) {
  for (auto& [key, values] : m) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
  }
}

template <typename Map>
const typename Map::mapped_type* Lookup(const Map& m, std::string_view key) {
  const auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

size_t UnitCount(std::string_view text) { return SplitOnSpaces(text).size(); }

// Better of two in-vocabulary words: higher frequency, then lower code points.
bool Preferred(const Vocabulary& vocab, const std::string& a, const std::string& b) {
  const int64_t fa = vocab.Frequency(a);
  const int64_t fb = vocab.Frequency(b);
  if (fa != fb) return fa > fb;
  return CodepointLess(a, b);
}

}  // namespace

RecoveryIndex::RecoveryIndex(const ResourceBundle& bundle, const ExpansionConfig& config,
                             int max_depth)
    : bundle_(bundle), max_depth_(max_depth) {
  if (max_depth_ < 1) throw Error(ErrorCode::kPrecondition, "recovery depth must be positive");
  for (const auto& [ch, neighbors] : bundle.visual_neighbors) {
    for (const auto& n : neighbors) reverse_visual_[n.character].push_back(ch);
  }
  for (const auto& [word, freq] : bundle.vocabulary.entries()) {
    if (!IsAllHanzi(word)) continue;
    try {
      reverse_pinyin_[PinyinOf({word, TokenKind::kHanziWord}, bundle).surface].push_back(word);
    } catch (const Error&) {
    }
  }
  const size_t translit_cap = std::max<size_t>(config.cap(Rule::kTransliteration), 1);
  for (const auto& [word, phonemes] : bundle.phoneme_lexicon) {
    try {
      for (const Token& t : Transliterate({word, TokenKind::kLatinWord}, translit_cap, bundle)) {
        reverse_translit_[t.surface].push_back(word);
      }
    } catch (const Error&) {
    }
  }
  for (const auto& [word, english] : bundle.translation_dict) {
    for (const auto& en : english) reverse_translation_[en].push_back(word);
  }
  SortUnique(reverse_visual_);
  SortUnique(reverse_pinyin_);
  SortUnique(reverse_translit_);
  SortUnique(reverse_translation_);

  for (const auto& [pinyin, words] : reverse_pinyin_) {
    if (UnitCount(pinyin) >= 2) {
      reverse_acronym_[Acronym({pinyin, TokenKind::kPinyinSeq}).surface].push_back(
          {pinyin, TokenKind::kPinyinSeq});
    }
  }
  for (const auto& [en, words] : reverse_translation_) {
    if (UnitCount(en) >= 2) {
      reverse_acronym_[Acronym({en, TokenKind::kLatinWord}).surface].push_back(
          {en, TokenKind::kLatinWord});
    }
  }
  for (auto& [acr, tokens] : reverse_acronym_) std::sort(tokens.begin(), tokens.end());
}

void RecoveryIndex::AddHanziPredecessors(const std::string& surface,
                                         std::vector<Token>& out) const {
  const std::vector<std::string> chars = SplitCodepoints(surface);
  auto replaced = [&](size_t begin, size_t end, const std::string& with) {
    std::string s;
    for (size_t i = 0; i < begin; ++i) s += chars[i];
    s += with;
    for (size_t i = end; i < chars.size(); ++i) s += chars[i];
    return s;
  };
  for (size_t i = 0; i + 1 < chars.size(); ++i) {
    if (auto whole = Reassemble(chars[i] + chars[i + 1], bundle_)) {
      out.push_back({replaced(i, i + 2, *whole), TokenKind::kHanziWord});
    }
  }
  for (size_t i = 0; i < chars.size(); ++i) {
    if (const auto* originals = Lookup(reverse_visual_, chars[i])) {
      for (const auto& c : *originals) {
        out.push_back({replaced(i, i + 1, c), TokenKind::kHanziWord});
      }
    }
    for (const auto& n : VisualNeighbors(chars[i], SIZE_MAX, bundle_)) {
      out.push_back({replaced(i, i + 1, n.character), TokenKind::kHanziWord});
    }
  }
  try {
    out.push_back(PinyinOf({surface, TokenKind::kHanziWord}, bundle_));
  } catch (const Error&) {
  }
  if (const auto* words = Lookup(reverse_translit_, surface)) {
    for (const auto& w : *words) out.push_back({w, TokenKind::kLatinWord});
  }
}

std::vector<Token> RecoveryIndex::Predecessors(const Token& token) const {
  std::vector<Token> raw;
  const std::string& s = token.surface;
  switch (token.kind) {
    case TokenKind::kHanziWord:
    case TokenKind::kComponentSeq:
      AddHanziPredecessors(s, raw);
      break;
    case TokenKind::kPinyinSeq:
      if (const auto* words = Lookup(reverse_pinyin_, s)) {
        for (const auto& w : *words) raw.push_back({w, TokenKind::kHanziWord});
      }
      if (UnitCount(s) >= 2) raw.push_back(Acronym(token));
      break;
    case TokenKind::kLatinWord:
    case TokenKind::kAcronym:
      if (const auto* words = Lookup(reverse_translation_, s)) {
        for (const auto& w : *words) raw.push_back({w, TokenKind::kHanziWord});
      }
      if (const auto* phrases = Lookup(reverse_acronym_, s)) {
        raw.insert(raw.end(), phrases->begin(), phrases->end());
      }
      break;
    case TokenKind::kOther:
      break;
  }
  std::vector<Token> out;
  std::set<Token> seen{token};
  for (Token& t : raw) {
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  return out;
}

std::optional<std::pair<std::string, int>> RecoveryIndex::Nearest(const Token& token) const {
  const Vocabulary& vocab = bundle_.vocabulary;
  if (vocab.Contains(token.surface)) return std::make_pair(token.surface, 0);
  std::set<Token> visited{token};
  std::vector<Token> frontier{token};
  for (int depth = 1; depth <= max_depth_ && !frontier.empty(); ++depth) {
    std::vector<Token> next;
    std::optional<std::string> best;
    for (const Token& t : frontier) {
      for (Token& p : Predecessors(t)) {
        if (visited.size() >= kMaxVisited) break;
        if (!visited.insert(p).second) continue;
        if (p.kind == TokenKind::kHanziWord && vocab.Contains(p.surface)) {
          if (!best || Preferred(vocab, p.surface, *best)) best = p.surface;
        }
        next.push_back(std::move(p));
      }
    }
    if (best) return std::make_pair(*best, depth);
    frontier = std::move(next);
  }
  return std::nullopt;
}

std::vector<size_t> DetectAbnormal(const std::vector<Token>& tokens,
                                   const RecoveryIndex& index) {
  std::vector<size_t> out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (index.bundle().vocabulary.Contains(tokens[i].surface)) continue;
    if (!index.Predecessors(tokens[i]).empty()) out.push_back(i);
  }
  return out;
}

RecoveryReport AgbrRecover(const std::vector<Token>& tokens, const RecoveryIndex& index) {
  RecoveryReport report;
  report.recovered = tokens;
  for (size_t i : DetectAbnormal(tokens, index)) {
    const auto nearest = index.Nearest(tokens[i]);
    if (!nearest) {
      report.unresolved.push_back(i);
      continue;
    }
    report.replacements.push_back({i, tokens[i].surface, nearest->first, nearest->second});
    report.recovered[i] = {nearest->first, TokenKind::kHanziWord};
  }
  return report;
}

namespace {

std::optional<NodeId> AbnormalNode(const Token& token, const AssocGraph& graph,
                                   const Vocabulary& vocab) {
  if (vocab.Contains(token.surface)) return std::nullopt;
  for (NodeId id = 0; id < graph.nodes().size(); ++id) {
    if (graph.node(id).token.surface == token.surface && !graph.is_root(id)) return id;
  }
  return std::nullopt;
}

}  // namespace

std::vector<size_t> DetectAbnormal(const std::vector<Token>& tokens, const AssocGraph& graph,
                                   const Vocabulary& vocab) {
  std::vector<size_t> out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (AbnormalNode(tokens[i], graph, vocab)) out.push_back(i);
  }
  return out;
}

RecoveryReport AgbrRecover(const std::vector<Token>& tokens, const AssocGraph& graph,
                           const Vocabulary& vocab) {
  RecoveryReport report;
  report.recovered = tokens;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const auto node = AbnormalNode(tokens[i], graph, vocab);
    if (!node) continue;
    const std::vector<int> dist = graph.Distances(*node);
    std::optional<NodeId> best;
    for (NodeId id = 0; id < dist.size(); ++id) {
      const Token& t = graph.node(id).token;
      if (dist[id] <= 0 || !vocab.Contains(t.surface)) continue;
      if (!best || dist[id] < dist[*best] ||
          (dist[id] == dist[*best] &&
           Preferred(vocab, t.surface, graph.node(*best).token.surface))) {
        best = id;
      }
    }
    if (!best) {
      report.unresolved.push_back(i);
      continue;
    }
    const Token& chosen = graph.node(*best).token;
    report.replacements.push_back({i, tokens[i].surface, chosen.surface, dist[*best]});
    report.recovered[i] = chosen;
  }
  return report;
}

AugmentationResult Augment(const LabeledDataset& dataset, const AugmentationPlan& plan,
                           const Attacker& attacker) {
  if (!(plan.fraction >= 0.0 && plan.fraction <= 1.0)) {
    throw Error(ErrorCode::kPrecondition, "augmentation fraction must be in [0, 1]");
  }
  dataset.Validate();
  std::vector<size_t> pool;
  for (size_t i = 0; i < dataset.examples.size(); ++i) {
    if (dataset.examples[i].label == plan.attacked_label) pool.push_back(i);
  }
  if (pool.empty()) {
    throw Error(ErrorCode::kInvalidDataset,
                "dataset has no examples of class " + std::to_string(plan.attacked_label));
  }
  const auto count = static_cast<size_t>(
      std::floor(plan.fraction * static_cast<double>(pool.size()) + 1e-9));
  Rng rng(plan.seed);
  for (size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[i + rng.Index(pool.size() - i)]);
  }
  AugmentationResult result;
  result.dataset = dataset;
  result.selected.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(result.selected.begin(), result.selected.end());
  for (size_t i : result.selected) {
    if (auto text = attacker(dataset.examples[i], i)) {
      result.dataset.examples[i].text = std::move(*text);
      ++result.replaced;
    }
  }
  return result;
}

TokenClassifier OracleClassifier(const VictimOracle& oracle) {
  return [&oracle](const std::vector<Token>& tokens) {
    return oracle.Predict(RenderTokens(tokens)).label;
  };
}

TokenClassifier RecoveringClassifier(const VictimOracle& oracle, const RecoveryIndex& index) {
  return [&oracle, &index](const std::vector<Token>& tokens) {
    return oracle.Predict(RenderTokens(AgbrRecover(tokens, index).recovered)).label;
  };
}

double TokenAccuracy(const TokenClassifier& classifier,
                     const std::vector<TokenizedExample>& examples) {
  if (examples.empty()) throw Error(ErrorCode::kInvalidEvaluation, "no examples to score");
  size_t correct = 0;
  for (const auto& ex : examples) {
    if (classifier(ex.tokens) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

ShieldResult ShieldEval(const TokenClassifier& before, const TokenClassifier& after,
                        const std::vector<TokenizedExample>& clean_test,
                        const std::vector<TokenizedExample>& perturbed_test) {
  if (perturbed_test.empty()) {
    throw Error(ErrorCode::kInvalidEvaluation, "perturbed test set is empty");
  }
  if (clean_test.empty()) throw Error(ErrorCode::kInvalidEvaluation, "clean test set is empty");
  ShieldResult r;
  r.adv_before = TokenAccuracy(before, perturbed_test);
  r.adv_after = TokenAccuracy(after, perturbed_test);
  r.all_before = TokenAccuracy(before, clean_test);
  r.all_after = TokenAccuracy(after, clean_test);
  r.delta_adv = r.adv_after - r.adv_before;
  r.delta_all = r.all_after - r.all_before;
  return r;
}

}  // namespace chainattack
