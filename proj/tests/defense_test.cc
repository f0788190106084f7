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
#include <set>

#include "chainattack/error.h"
#include "gtest/gtest.h"
#include "test_data.h"

namespace chainattack {
namespace {

using ::chainattack::testing::Bundle;
using ::chainattack::testing::FunctionOracle;
using ::chainattack::testing::Hanzi;
using ::chainattack::testing::ToyModel;
using ::chainattack::testing::ToyTest;

const RecoveryIndex& Index() {
  static const RecoveryIndex* index = new RecoveryIndex(Bundle());
  return *index;
}

TEST(RecoveryIndexTest, ComponentsReassemble) {
  const auto nearest = Index().Nearest({"幺力稚", TokenKind::kComponentSeq});
  ASSERT_TRUE(nearest.has_value());
  EXPECT_EQ(nearest->first, "幼稚");
  EXPECT_EQ(nearest->second, 1);
}

TEST(RecoveryIndexTest, DirectAssociatesRecoverInOneStep) {
  const ExpansionConfig config = ExpansionConfig::Defaults();
  for (const std::string word : {"幼稚", "衣服", "服务", "质量", "价格"}) {
    ASSERT_TRUE(Bundle().vocabulary.Contains(word));
    const AssocGraph g = ExpandWord(Hanzi(word), Bundle(), config);
    const NodeId root = g.roots().front();
    for (NodeId id : g.CandidateSet(root)) {
      const Token& t = g.node(id).token;
      if (Bundle().vocabulary.Contains(t.surface)) continue;
      const auto nearest = Index().Nearest(t);
      if (g.LayerDistance(root, id) == 1) {
        ASSERT_TRUE(nearest.has_value()) << word << " -> " << t.surface;
        EXPECT_EQ(nearest->second, 1) << t.surface;
        const auto preds = Index().Predecessors(t);
        EXPECT_NE(std::find(preds.begin(), preds.end(), Hanzi(word)), preds.end()) << t.surface;
      }
      if (nearest) {
        EXPECT_TRUE(Bundle().vocabulary.Contains(nearest->first)) << t.surface;
      }
    }
  }
}

TEST(RecoveryIndexTest, VocabularyWordsHaveNoPredecessorsNeeded) {
  EXPECT_FALSE(Index().Nearest({"zzzzqx", TokenKind::kLatinWord}).has_value());
}

TEST(AgbrTest, CleanTextUnchanged) {
  for (size_t i = 0; i < 20; ++i) {
    const auto tokens = Segment(ToyTest().examples[i].text, Bundle().vocabulary);
    const RecoveryReport r = AgbrRecover(tokens, Index());
    EXPECT_EQ(r.recovered, tokens) << ToyTest().examples[i].text;
    EXPECT_TRUE(r.replacements.empty());
  }
}

TEST(AgbrTest, RecoversAndIsIdempotent) {
  const std::vector<Token> tokens{Hanzi("这"), {"幺力稚", TokenKind::kComponentSeq}, Hanzi("。")};
  const auto abnormal = DetectAbnormal(tokens, Index());
  EXPECT_EQ(abnormal, std::vector<size_t>{1});
  const RecoveryReport r = AgbrRecover(tokens, Index());
  ASSERT_EQ(r.replacements.size(), 1u);
  EXPECT_EQ(r.replacements[0].position, 1u);
  EXPECT_EQ(r.replacements[0].abnormal, "幺力稚");
  EXPECT_EQ(r.recovered[1], Hanzi("幼稚"));
  const RecoveryReport again = AgbrRecover(r.recovered, Index());
  EXPECT_EQ(again.recovered, r.recovered);
  EXPECT_TRUE(again.replacements.empty());
}

TEST(AgbrTest, ReplacementsAreInVocabulary) {
  const AssocGraph g = ExpandWord(Hanzi("幼稚"), Bundle(), ExpansionConfig::Defaults());
  for (NodeId id : g.CandidateSet(g.roots().front())) {
    const RecoveryReport r = AgbrRecover({g.node(id).token}, Index());
    for (const auto& rep : r.replacements) {
      EXPECT_TRUE(Bundle().vocabulary.Contains(rep.chosen)) << rep.chosen;
      EXPECT_GE(rep.distance, 1);
    }
    for (size_t u : r.unresolved) EXPECT_EQ(r.recovered[u], g.node(id).token);
  }
}

TEST(AgbrTest, GraphOverloadFindsRoot) {
  const AssocGraph g = ExpandWord(Hanzi("幼稚"), Bundle(), ExpansionConfig::Defaults());
  const auto comp = g.Find({"幺力稚", TokenKind::kComponentSeq});
  ASSERT_TRUE(comp.has_value());
  const std::vector<Token> tokens{Hanzi("很"), g.node(*comp).token};
  EXPECT_EQ(DetectAbnormal(tokens, g, Bundle().vocabulary), std::vector<size_t>{1});
  const RecoveryReport r = AgbrRecover(tokens, g, Bundle().vocabulary);
  EXPECT_EQ(r.recovered[1], Hanzi("幼稚"));
  EXPECT_EQ(r.recovered[0], Hanzi("很"));
}

LabeledDataset SmallDataset() {
  LabeledDataset d;
  d.class_names = {"neg", "pos"};
  for (int i = 0; i < 10; ++i) d.examples.push_back({"例" + std::to_string(i), i % 2});
  return d;
}

TEST(AugmentTest, FractionBounds) {
  const LabeledDataset d = SmallDataset();
  const Attacker attacker = [](const LabeledExample& e, size_t) {
    return std::optional<std::string>(e.text + "!");
  };
  const auto none = Augment(d, {0.0, 1, 3}, attacker);
  EXPECT_EQ(none.dataset.examples, d.examples);
  EXPECT_EQ(none.replaced, 0u);
  const auto all = Augment(d, {1.0, 1, 3}, attacker);
  EXPECT_EQ(all.selected.size(), 5u);
  EXPECT_EQ(all.replaced, 5u);
  ASSERT_EQ(all.dataset.examples.size(), d.examples.size());
  for (size_t i = 0; i < d.examples.size(); ++i) {
    EXPECT_EQ(all.dataset.examples[i].label, d.examples[i].label);
    EXPECT_EQ(all.dataset.examples[i].text,
              d.examples[i].text + (d.examples[i].label == 1 ? "!" : ""));
  }
}

TEST(AugmentTest, PartialSelectionIsSeededAndFailuresKeepOriginal) {
  const LabeledDataset d = SmallDataset();
  const Attacker attacker = [](const LabeledExample& e, size_t i) -> std::optional<std::string> {
    if (i % 3 == 0) return std::nullopt;
    return e.text + "?";
  };
  const auto a = Augment(d, {0.6, 1, 9}, attacker);
  const auto b = Augment(d, {0.6, 1, 9}, attacker);
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.selected.size(), 3u);
  size_t changed = 0;
  for (size_t i = 0; i < d.examples.size(); ++i) {
    if (a.dataset.examples[i] != d.examples[i]) {
      ++changed;
      EXPECT_EQ(d.examples[i].label, 1);
    }
  }
  EXPECT_EQ(changed, a.replaced);
}

TEST(AugmentTest, Errors) {
  const Attacker attacker = [](const LabeledExample&, size_t) { return std::nullopt; };
  EXPECT_THROW(Augment(SmallDataset(), {1.5, 1, 1}, attacker), Error);
  EXPECT_THROW(Augment(SmallDataset(), {0.5, 7, 1}, attacker), Error);
}

std::vector<TokenizedExample> Tokenized(size_t n) {
  std::vector<TokenizedExample> out;
  for (size_t i = 0; i < n; ++i) {
    out.push_back({Segment(ToyTest().examples[i].text, Bundle().vocabulary),
                   ToyTest().examples[i].label});
  }
  return out;
}

TEST(ShieldTest, IdenticalClassifiersGiveZeroDelta) {
  const TokenClassifier c = OracleClassifier(ToyModel());
  const auto examples = Tokenized(30);
  const ShieldResult r = ShieldEval(c, c, examples, examples);
  EXPECT_DOUBLE_EQ(r.delta_adv, 0.0);
  EXPECT_DOUBLE_EQ(r.delta_all, 0.0);
  EXPECT_DOUBLE_EQ(r.adv_before, TokenAccuracy(c, examples));
}

TEST(ShieldTest, RecoveringClassifierHelpsOnComponents) {
  const FunctionOracle oracle([](std::string_view t) {
    const double c = t.find("幼稚") != std::string_view::npos ? 0.9 : 0.2;
    return std::vector<double>{1.0 - c, c};
  });
  const std::vector<TokenizedExample> adv{
      {{Hanzi("很"), {"幺力稚", TokenKind::kComponentSeq}}, 1}};
  const std::vector<TokenizedExample> clean{{{Hanzi("很"), Hanzi("幼稚")}, 1}};
  const ShieldResult r =
      ShieldEval(OracleClassifier(oracle), RecoveringClassifier(oracle, Index()), clean, adv);
  EXPECT_DOUBLE_EQ(r.adv_before, 0.0);
  EXPECT_DOUBLE_EQ(r.adv_after, 1.0);
  EXPECT_DOUBLE_EQ(r.delta_adv, 1.0);
  EXPECT_DOUBLE_EQ(r.delta_all, 0.0);
}

TEST(ShieldTest, EmptySetIsAnError) {
  const TokenClassifier c = OracleClassifier(ToyModel());
  try {
    TokenAccuracy(c, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidEvaluation);
  }
}

}  // namespace
}  // namespace chainattack
