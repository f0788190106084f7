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

#include "chainattack/lexicon.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

#include "chainattack/error.h"
#include "chainattack/utf8.h"
#include "gtest/gtest.h"
#include "test_data.h"

namespace chainattack {
namespace {

using ::chainattack::testing::Bundle;
using ::chainattack::testing::BundleDir;
using ::chainattack::testing::Hanzi;

std::vector<std::pair<std::string, std::string>> RawRows(const std::string& stem) {
  std::ifstream in(BundleDir() / (stem + ".tsv"));
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const size_t tab = line.find('\t');
    if (tab != std::string::npos) rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return rows;
}

std::vector<std::string> Surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

bool Contains(const std::vector<Token>& tokens, const std::string& surface) {
  const auto s = Surfaces(tokens);
  return std::find(s.begin(), s.end(), surface) != s.end();
}

class ScratchBundle : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("chainattack_lexicon_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(dir_);
    std::filesystem::copy(BundleDir(), dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
};

TEST(LoadResourcesTest, LoadsEveryTable) {
  const ResourceBundle& b = Bundle();
  EXPECT_FALSE(b.pinyin_table.empty());
  EXPECT_FALSE(b.disassembly_table.empty());
  EXPECT_FALSE(b.translation_dict.empty());
  EXPECT_FALSE(b.phoneme_lexicon.empty());
  EXPECT_FALSE(b.phoneme_map.empty());
  EXPECT_FALSE(b.visual_neighbors.empty());
  EXPECT_GT(b.vocabulary.size(), 0u);
  EXPECT_GT(b.embeddings.size(), 0u);
  EXPECT_FALSE(b.hanzify_index.empty());
}

TEST(LoadResourcesTest, IsDeterministic) {
  const ResourceBundle again = LoadResources(BundleDir());
  EXPECT_EQ(again.hanzify_index.size(), Bundle().hanzify_index.size());
  EXPECT_EQ(again.vocabulary.entries(), Bundle().vocabulary.entries());
  for (const auto& [s, entries] : Bundle().hanzify_index) {
    const auto& other = again.hanzify_index.at(s);
    ASSERT_EQ(other.size(), entries.size());
    for (size_t i = 0; i < entries.size(); ++i) {
      EXPECT_EQ(other[i].character, entries[i].character);
    }
  }
}

TEST_F(ScratchBundle, MissingEmbeddingsIsNamed) {
  std::filesystem::remove(dir_ / "embeddings.tsv");
  try {
    LoadResources(dir_);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceMissing);
    EXPECT_NE(std::string(e.what()).find("embeddings"), std::string::npos);
  }
}

TEST_F(ScratchBundle, ExtraColumnReportsLine) {
  const size_t lines = RawRows("pinyin").size();
  {
    std::ofstream out(dir_ / "pinyin.tsv", std::ios::app);
    out << "好\thao\textra\n";
  }
  try {
    LoadResources(dir_);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find(":" + std::to_string(lines + 1) + ":"),
              std::string::npos)
        << e.what();
  }
}

TEST_F(ScratchBundle, UnnormalisedEmbeddingIsRejected) {
  {
    std::ofstream out(dir_ / "embeddings.tsv", std::ios::app);
    out << "坏";
    for (size_t i = 0; i < Bundle().embeddings.dimension(); ++i) out << (i ? " " : "\t") << 1.0;
    out << '\n';
  }
  try {
    LoadResources(dir_);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(BundleInvariantsTest, Hold) {
  const ResourceBundle& b = Bundle();
  for (const auto& [word, freq] : b.vocabulary.entries()) {
    for (const auto& ch : SplitCodepoints(word)) {
      if (IsAllHanzi(ch)) EXPECT_TRUE(b.pinyin_table.count(ch)) << ch;
    }
  }
  const size_t dim = b.embeddings.dimension();
  for (const auto& [token, unused] : RawRows("embeddings")) {
    const auto* v = b.embeddings.Find(token);
    ASSERT_NE(v, nullptr);
    ASSERT_EQ(v->size(), dim);
    double norm = 0.0;
    for (double x : *v) norm += x * x;
    EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-6);
  }
  std::set<std::string> components;
  for (const auto& [ch, comp] : b.disassembly_table) {
    EXPECT_GE(CodepointCount(comp), 2u);
    EXPECT_TRUE(components.insert(comp).second) << comp;
  }
  for (const auto& [ch, list] : b.visual_neighbors) {
    for (size_t i = 0; i < list.size(); ++i) {
      EXPECT_GE(list[i].score, 0.0);
      EXPECT_LE(list[i].score, 1.0);
      if (i > 0) EXPECT_LE(list[i].score, list[i - 1].score);
    }
  }
}

TEST(SegmentTest, PresegmentedInputSplitsOnSpaces) {
  EXPECT_EQ(Surfaces(Segment("服务 好", Bundle().vocabulary)),
            (std::vector<std::string>{"服务", "好"}));
}

TEST(SegmentTest, ForwardMaximumMatching) {
  Vocabulary vocab;
  vocab.Add("服务", 10);
  vocab.Add("好", 5);
  EXPECT_EQ(Surfaces(Segment("服务好", vocab)), (std::vector<std::string>{"服务", "好"}));
  Vocabulary overlap;
  overlap.Add("服", 1);
  overlap.Add("服务", 1);
  overlap.Add("务好", 1);
  // Longest match from the left wins even when a different split exists.
  EXPECT_EQ(Surfaces(Segment("服务好", overlap)), (std::vector<std::string>{"服务", "好"}));
}

TEST(SegmentTest, UnknownCharacterFallsBack) {
  Vocabulary vocab;
  vocab.Add("好", 5);
  EXPECT_EQ(Surfaces(Segment("X好", vocab)), (std::vector<std::string>{"X", "好"}));
}

TEST(SegmentTest, PreservesSurface) {
  for (const auto& ex : ::chainattack::testing::ToyTest().examples) {
    std::string joined;
    for (const auto& t : Segment(ex.text, Bundle().vocabulary)) joined += t.surface;
    EXPECT_EQ(joined, ex.text);
  }
}

TEST(PinyinOfTest, Examples) {
  EXPECT_EQ(PinyinOf(Hanzi("幼稚"), Bundle()).surface, "you zhi");
  EXPECT_EQ(PinyinOf(Hanzi("幼稚"), Bundle()).kind, TokenKind::kPinyinSeq);
  EXPECT_EQ(PinyinOf(Hanzi("好"), Bundle()).surface, "hao");
}

TEST(PinyinOfTest, Errors) {
  try {
    PinyinOf(Hanzi(""), Bundle());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
  try {
    PinyinOf(Hanzi("龘"), Bundle());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCoverage);
    EXPECT_NE(std::string(e.what()).find("龘"), std::string::npos);
  }
}

TEST(PinyinOfTest, SyllablesAreHanzifiable) {
  for (const auto& [word, freq] : Bundle().vocabulary.entries()) {
    if (!IsAllHanzi(word)) continue;
    for (const auto& s : SplitOnSpaces(PinyinOf(Hanzi(word), Bundle()).surface)) {
      EXPECT_TRUE(Bundle().hanzify_index.count(s)) << word << " " << s;
    }
  }
}

TEST(HanzifyTest, HaoIncludesCommonCharacters) {
  const auto out = Hanzify({"hao", TokenKind::kPinyinSeq}, 3, Bundle());
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(Contains(out, "好"));
  EXPECT_TRUE(Contains(out, "号"));
  EXPECT_TRUE(Contains(out, "郝"));
}

TEST(HanzifyTest, TopOneMatchesFrequencyFiles) {
  std::map<std::string, int64_t> freq;
  for (const auto& [w, f] : RawRows("vocab")) freq[w] = std::stoll(f);
  std::string best;
  int64_t best_freq = -1;
  for (const auto& [ch, readings] : RawRows("pinyin")) {
    std::stringstream ss(readings);
    std::string r;
    bool match = false;
    while (std::getline(ss, r, ',')) match = match || r == "hao";
    if (!match) continue;
    const int64_t f = std::max<int64_t>(1, freq.count(ch) ? freq[ch] : 0);
    if (f > best_freq || (f == best_freq && ch < best)) {
      best = ch;
      best_freq = f;
    }
  }
  const auto out = Hanzify({"hao", TokenKind::kPinyinSeq}, 1, Bundle());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].surface, best);
}

TEST(HanzifyTest, MultiSyllableRankedByFrequencyProduct) {
  const auto out = Hanzify({"you zhi", TokenKind::kPinyinSeq}, 20, Bundle());
  ASSERT_FALSE(out.empty());
  auto weight = [](const std::string& s) {
    double w = 0.0;
    const auto chars = SplitCodepoints(s);
    const auto syl = std::vector<std::string>{"you", "zhi"};
    for (size_t i = 0; i < chars.size(); ++i) {
      for (const auto& e : Bundle().hanzify_index.at(syl[i])) {
        if (e.character == chars[i]) w += std::log(static_cast<double>(e.frequency));
      }
    }
    return w;
  };
  for (size_t i = 1; i < out.size(); ++i) {
    EXPECT_GE(weight(out[i - 1].surface) + 1e-5, weight(out[i].surface));
  }
}

TEST(HanzifyTest, UnknownSyllable) {
  try {
    Hanzify({"zzz", TokenKind::kPinyinSeq}, 3, Bundle());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCoverage);
  }
}

TEST(TranslateTest, Examples) {
  EXPECT_TRUE(Contains(Translate(Hanzi("幼稚"), Bundle()), "naive"));
  EXPECT_TRUE(Translate(Hanzi("不存在的词"), Bundle()).empty());
  std::vector<std::string> expected;
  for (const auto& [w, en] : RawRows("translations")) {
    if (w != "牛逼") continue;
    std::stringstream ss(en);
    std::string e;
    while (std::getline(ss, e, '|')) expected.push_back(e);
  }
  ASSERT_FALSE(expected.empty());
  const auto out = Translate(Hanzi("牛逼"), Bundle());
  EXPECT_EQ(Surfaces(out), expected);
  for (const auto& t : out) EXPECT_EQ(t.kind, TokenKind::kLatinWord);
}

TEST(TransliterateTest, Examples) {
  EXPECT_TRUE(Contains(Transliterate({"naive", TokenKind::kLatinWord}, 3, Bundle()), "拿衣服"));
  EXPECT_TRUE(Contains(Transliterate({"fast", TokenKind::kLatinWord}, 3, Bundle()), "发思特"));
  EXPECT_LE(Transliterate({"naive", TokenKind::kLatinWord}, 2, Bundle()).size(), 2u);
}

TEST(TransliterateTest, Errors) {
  ResourceBundle b = Bundle();
  b.phoneme_lexicon["zorp"] = {"QX"};
  for (const std::string word : {"zorp", "notaword"}) {
    try {
      Transliterate({word, TokenKind::kLatinWord}, 3, b);
      FAIL() << word;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCoverage);
    }
  }
}

TEST(AcronymTest, Examples) {
  EXPECT_EQ(Acronym({"niu bi", TokenKind::kPinyinSeq}).surface, "nb");
  EXPECT_EQ(Acronym({"laugh out loud", TokenKind::kLatinWord}).surface, "lol");
  EXPECT_EQ(Acronym({"hao", TokenKind::kPinyinSeq}).surface, "h");
  EXPECT_EQ(Acronym({"hao", TokenKind::kPinyinSeq}).kind, TokenKind::kAcronym);
}

TEST(FuzzyExpandTest, Examples) {
  const auto out = FuzzyExpand({"tmd", TokenKind::kAcronym}, 0, Bundle());
  EXPECT_TRUE(Contains(out, "te miao de"));
  EXPECT_TRUE(Contains(out, "ta ma de"));
}

TEST(FuzzyExpandTest, SingleLetterScansSyllables) {
  std::map<std::string, int64_t> freq;
  for (const auto& [w, f] : RawRows("vocab")) freq[w] = std::stoll(f);
  std::map<std::string, int64_t> syllables;
  for (const auto& [ch, readings] : RawRows("pinyin")) {
    std::stringstream ss(readings);
    std::string r;
    while (std::getline(ss, r, ',')) {
      if (r[0] == 'q') syllables[r] += std::max<int64_t>(1, freq.count(ch) ? freq[ch] : 0);
    }
  }
  std::vector<std::pair<std::string, int64_t>> expected(syllables.begin(), syllables.end());
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const auto out = FuzzyExpand({"q", TokenKind::kAcronym}, 0, Bundle());
  ASSERT_EQ(out.size(), expected.size());
  for (size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].surface, expected[i].first);
}

TEST(FuzzyExpandTest, LimitTruncates) {
  EXPECT_EQ(FuzzyExpand({"tmd", TokenKind::kAcronym}, 5, Bundle()).size(), 5u);
}

TEST(FuzzyExpandTest, DigitBeginsNoSyllable) {
  try {
    FuzzyExpand({"x9", TokenKind::kAcronym}, 0, Bundle());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCoverage);
  }
}

TEST(FuzzyExpandTest, RecoversPinyinOfVocabularyWords) {
  size_t checked = 0;
  for (const auto& [word, freq] : Bundle().vocabulary.entries()) {
    if (!IsAllHanzi(word) || CodepointCount(word) != 2 || checked >= 50) continue;
    const Token p = PinyinOf(Hanzi(word), Bundle());
    EXPECT_TRUE(Contains(FuzzyExpand(Acronym(p), 0, Bundle()), p.surface)) << p.surface;
    ++checked;
  }
  EXPECT_EQ(checked, 50u);
}

TEST(DisassembleTest, Examples) {
  EXPECT_EQ(Disassemble("幼", Bundle())->surface, "幺力");
  EXPECT_EQ(Disassemble("稚", Bundle())->surface, "禾隹");
  EXPECT_EQ(Disassemble("稚", Bundle())->kind, TokenKind::kComponentSeq);
  EXPECT_FALSE(Disassemble("一", Bundle()).has_value());
}

TEST(ReassembleTest, Examples) {
  EXPECT_EQ(Reassemble("幺力", Bundle()), "幼");
  EXPECT_EQ(Reassemble("禾隹", Bundle()), "稚");
  EXPECT_FALSE(Reassemble("好好", Bundle()).has_value());
}

TEST(ReassembleTest, RoundTripsEveryEntry) {
  for (const auto& [ch, comp] : Bundle().disassembly_table) {
    EXPECT_EQ(Reassemble(Disassemble(ch, Bundle())->surface, Bundle()), ch);
  }
}

TEST(VisualNeighborsTest, Examples) {
  const auto ri = VisualNeighbors("日", 1, Bundle());
  ASSERT_EQ(ri.size(), 1u);
  EXPECT_EQ(ri[0].character, "曰");
  EXPECT_GT(ri[0].score, 0.0);
  bool has_xing = false;
  for (const auto& n : VisualNeighbors("辛", 10, Bundle())) has_xing |= n.character == "刑";
  EXPECT_TRUE(has_xing);
  EXPECT_TRUE(VisualNeighbors("龘", 3, Bundle()).empty());
}

TEST(ClassifySurfaceTest, Kinds) {
  EXPECT_EQ(ClassifySurface("幼稚", &Bundle()), TokenKind::kHanziWord);
  EXPECT_EQ(ClassifySurface("you zhi", &Bundle()), TokenKind::kPinyinSeq);
  EXPECT_EQ(ClassifySurface("naive", &Bundle()), TokenKind::kLatinWord);
  EXPECT_EQ(ClassifySurface("，", &Bundle()), TokenKind::kOther);
}

}  // namespace
}  // namespace chainattack
