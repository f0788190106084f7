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

#ifndef CHAINATTACK_LEXICON_H_
#define CHAINATTACK_LEXICON_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chainattack {

enum class TokenKind {
  kHanziWord,
  kPinyinSeq,
  kLatinWord,
  kAcronym,
  kComponentSeq,
  // Punctuation, digits and mixed-script text produced by segmentation.
  kOther,
};

std::string_view TokenKindName(TokenKind kind);
// Throws Error(kParse) on an unknown name.
TokenKind ParseTokenKind(std::string_view name);

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::kHanziWord;

  friend auto operator<=>(const Token&, const Token&) = default;
};

// Syllables inside a pinyin_seq token are separated by this character.
inline constexpr char kSyllableDelimiter = ' ';

class Vocabulary {
 public:
  void Add(std::string word, int64_t frequency);
  bool Contains(std::string_view word) const;
  // 0 for absent words.
  int64_t Frequency(std::string_view word) const;
  size_t max_word_codepoints() const { return max_word_codepoints_; }
  size_t size() const { return frequency_.size(); }
  const std::map<std::string, int64_t, std::less<>>& entries() const {
    return frequency_;
  }

 private:
  std::map<std::string, int64_t, std::less<>> frequency_;
  size_t max_word_codepoints_ = 0;
};

class Embeddings {
 public:
  // Throws Error(kParse) if the dimension differs or the norm is not 1.
  void Add(std::string token, std::vector<double> vector);

  size_t dimension() const { return dimension_; }
  size_t size() const { return table_.size(); }
  const std::vector<double>* Find(std::string_view token) const;

  // Direct lookup, else the mean of the token's per-character vectors when at
  // least one character has one, else nullopt.
  std::optional<std::vector<double>> LookupWithBackoff(
      std::string_view token) const;

 private:
  size_t dimension_ = 0;
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

struct VisualNeighbor {
  std::string character;
  double score = 0.0;
};

struct HanzifyEntry {
  std::string character;
  int64_t frequency = 0;
};

// A pinyin syllable proposed for a phoneme unit, with the conventional
// transliteration character when the bundle names one.
struct TransliterationSyllable {
  std::string syllable;
  std::string character;
};

struct ResourceBundle {
  std::map<std::string, std::vector<std::string>, std::less<>> pinyin_table;
  std::map<std::string, std::string, std::less<>> disassembly_table;
  std::map<std::string, std::string, std::less<>> reassembly_table;
  std::map<std::string, std::vector<std::string>, std::less<>> translation_dict;
  std::map<std::string, std::vector<std::string>, std::less<>> phoneme_lexicon;
  std::map<std::string, std::vector<TransliterationSyllable>, std::less<>>
      phoneme_map;
  std::map<std::string, std::vector<VisualNeighbor>, std::less<>>
      visual_neighbors;
  Vocabulary vocabulary;
  Embeddings embeddings;
  // Derived at load time from pinyin_table and vocabulary frequencies.
  std::map<std::string, std::vector<HanzifyEntry>, std::less<>> hanzify_index;
  std::map<std::string, int64_t, std::less<>> syllable_frequency;

  // Recomputes hanzify_index, syllable_frequency and reassembly_table and
  // checks the cross-table invariants. Throws Error(kParse).
  void Finalize();
};

// Reads pinyin.tsv, disassembly.tsv, translations.tsv, phonemes.tsv,
// phoneme_map.tsv, visual.tsv, vocab.tsv and embeddings.tsv from `dir`.
ResourceBundle LoadResources(const std::filesystem::path& dir);

// Forward maximum matching; text containing ASCII spaces is taken as already
// segmented and split on the spaces.
std::vector<Token> Segment(std::string_view text, const Vocabulary& vocab);

// Kind implied by the surface alone. Lowercase Latin phrases whose units are
// all known syllables are pinyin; other lowercase phrases are Latin words.
TokenKind ClassifySurface(std::string_view surface,
                          const ResourceBundle* bundle = nullptr);

Token PinyinOf(const Token& word, const ResourceBundle& bundle);

std::vector<Token> Hanzify(const Token& pinyin_seq, size_t k,
                           const ResourceBundle& bundle);

std::vector<Token> Translate(const Token& word, const ResourceBundle& bundle);

std::vector<Token> Transliterate(const Token& word, size_t k,
                                 const ResourceBundle& bundle);

Token Acronym(const Token& seq);

// limit == 0 means no limit.
std::vector<Token> FuzzyExpand(const Token& acronym, size_t limit,
                               const ResourceBundle& bundle);

std::optional<Token> Disassemble(std::string_view character,
                                 const ResourceBundle& bundle);

std::optional<std::string> Reassemble(std::string_view components,
                                      const ResourceBundle& bundle);

std::vector<VisualNeighbor> VisualNeighbors(std::string_view character,
                                            size_t k,
                                            const ResourceBundle& bundle);

}  // namespace chainattack

#endif  // CHAINATTACK_LEXICON_H_
