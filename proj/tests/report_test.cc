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

#include "chainattack/report.h"

#include "chainattack/error.h"
#include "gtest/gtest.h"
#include "test_data.h"

namespace chainattack {
namespace {

using ::chainattack::testing::Bundle;
using ::chainattack::testing::ToyModel;
using ::chainattack::testing::ToyTest;

TEST(ReportTest, AttackRecordRoundTrip) {
  const auto& ex = ToyTest().examples[1];
  const auto tokens = Segment(ex.text, Bundle().vocabulary);
  PsoConfig c;
  c.seed = 4;
  const AttackResult r = PsoAttack(tokens, ex.label, ToyModel(), Bundle(),
                                   ExpansionConfig::Defaults(), c);
  const Json j = ToJson(r);
  EXPECT_EQ(j.at("original").get<std::string>(), RenderTokens(r.original));
  EXPECT_EQ(j.at("adversarial").get<std::string>(), RenderTokens(r.adversarial));
  const AttackResult back = AttackResultFromJson(Json::parse(j.dump()));
  EXPECT_EQ(back.status, r.status);
  EXPECT_EQ(back.original, r.original);
  EXPECT_EQ(back.adversarial, r.adversarial);
  EXPECT_EQ(back.label, r.label);
  EXPECT_EQ(back.success, r.success);
  EXPECT_DOUBLE_EQ(back.score, r.score);
  EXPECT_DOUBLE_EQ(back.confidence, r.confidence);
  EXPECT_EQ(back.layers, r.layers);
  EXPECT_EQ(back.queries, r.queries);
  EXPECT_EQ(back.history, r.history);
  ASSERT_EQ(back.substitutions.size(), r.substitutions.size());
  for (size_t i = 0; i < r.substitutions.size(); ++i) {
    EXPECT_EQ(back.substitutions[i].to, r.substitutions[i].to);
    EXPECT_EQ(back.substitutions[i].rules, r.substitutions[i].rules);
  }
}

TEST(ReportTest, TokensRoundTrip) {
  const std::vector<Token> tokens{{"服务", TokenKind::kHanziWord},
                                  {"fu wu", TokenKind::kPinyinSeq},
                                  {"FW", TokenKind::kAcronym},
                                  {"！", TokenKind::kOther}};
  EXPECT_EQ(TokensFromJson(TokensToJson(tokens)), tokens);
}

TEST(ReportTest, MalformedRecord) {
  EXPECT_THROW(AttackResultFromJson(Json::parse(R"({"status":"attacked"})")), Error);
  EXPECT_THROW(AttackResultFromJson(Json::parse(R"({"status":"weird"})")), Error);
}

TEST(ReportTest, EvalRowUndefinedDistance) {
  EvalRow row;
  row.model = "m";
  row.examples = 2;
  const Json j = ToJson(row);
  EXPECT_TRUE(j.at("mean_wmd").is_null());
  EXPECT_NE(EvalRowTsv(row).find("N/A"), std::string::npos);
}

}  // namespace
}  // namespace chainattack
