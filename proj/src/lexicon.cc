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
#include <sstream>
#include <utility>

#include "chainattack/error.h"
#include "chainattack/utf8.h"
#include "kbest.h"

namespace chainattack {
namespace {

constexpr size_t kTransliterationFanout = 3;

struct TsvLine {
  size_t number;
  std::vector<std::string> fields;
};

std::vector<std::string> SplitOn(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t end = text.find(sep, start);
    if (end == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

[[noreturn]] void ParseFail(const std::string& file, size_t line,
                            const std::string& what) {
  throw Error(ErrorCode::kParse,
              file + ":" + std::to_string(line) + ": " + what);
}

std::vector<TsvLine> ReadTsv(const std::filesystem::path& dir,
                             const std::string& stem) {
  const std::filesystem::path path = dir / (stem + ".tsv");
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kResourceMissing,
                stem + " (" + path.string() + ")");
  }
  std::vector<TsvLine> lines;
  std::string line;
  size_t number = 0;
  const std::string file = stem + ".tsv";
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = SplitOn(line, '\t');
    if (fields.size() != 2) {
      ParseFail(file, number,
                "expected 2 tab-separated columns, found " +
                    std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      ParseFail(file, number, "empty column");
    }
    try {
      DecodeUtf8(line);
    } catch (const Error&) {
      ParseFail(file, number, "invalid UTF-8");
    }
    lines.push_back({number, std::move(fields)});
  }
  return lines;
}

bool IsSyllable(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= 'a' && c <= 'z'; });
}

int64_t LogCost(int64_t max_frequency, int64_t frequency) {
  return std::llround((std::log(static_cast<double>(max_frequency)) -
                       std::log(static_cast<double>(frequency))) *
                      1e6);
}

std::string JoinSyllables(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(kSyllableDelimiter);
    out += parts[i];
  }
  return out;
}

const std::vector<HanzifyEntry>& HanzifyOptions(const ResourceBundle& bundle,
                                                const std::string& syllable) {
  auto it = bundle.hanzify_index.find(syllable);
  if (it == bundle.hanzify_index.end()) {
    throw Error(ErrorCode::kCoverage, "unknown pinyin syllable '" + syllable + "'");
  }
  return it->second;
}

}  // namespace

std::string_view TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kHanziWord: return "hanzi_word";
    case TokenKind::kPinyinSeq: return "pinyin_seq";
    case TokenKind::kLatinWord: return "latin_word";
    case TokenKind::kAcronym: return "acronym";
    case TokenKind::kComponentSeq: return "component_seq";
    case TokenKind::kOther: return "other";
  }
  return "other";
}

TokenKind ParseTokenKind(std::string_view name) {
  for (TokenKind kind :
       {TokenKind::kHanziWord, TokenKind::kPinyinSeq, TokenKind::kLatinWord,
        TokenKind::kAcronym, TokenKind::kComponentSeq, TokenKind::kOther}) {
    if (TokenKindName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kParse, "unknown token kind '" + std::string(name) + "'");
}

void Vocabulary::Add(std::string word, int64_t frequency) {
  max_word_codepoints_ = std::max(max_word_codepoints_, CodepointCount(word));
  frequency_[std::move(word)] = frequency;
}

bool Vocabulary::Contains(std::string_view word) const {
  return frequency_.find(word) != frequency_.end();
}

int64_t Vocabulary::Frequency(std::string_view word) const {
  auto it = frequency_.find(word);
  return it == frequency_.end() ? 0 : it->second;
}

void Embeddings::Add(std::string token, std::vector<double> vector) {
  if (vector.empty()) {
    throw Error(ErrorCode::kParse, "empty embedding for '" + token + "'");
  }
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::kParse,
                "embedding for '" + token + "' has dimension " +
                    std::to_string(vector.size()) + ", expected " +
                    std::to_string(dimension_));
  }
  double norm = 0.0;
  for (double x : vector) norm += x * x;
  norm = std::sqrt(norm);
  if (std::abs(norm - 1.0) > 1e-6) {
    throw Error(ErrorCode::kParse,
                "embedding for '" + token + "' is not unit norm");
  }
  table_[std::move(token)] = std::move(vector);
}

const std::vector<double>* Embeddings::Find(std::string_view token) const {
  auto it = table_.find(token);
  return it == table_.end() ? nullptr : &it->second;
}

std::optional<std::vector<double>> Embeddings::LookupWithBackoff(
    std::string_view token) const {
  if (const auto* v = Find(token)) return *v;
  std::vector<double> sum(dimension_, 0.0);
  size_t found = 0;
  for (const std::string& ch : SplitCodepoints(token)) {
    if (const auto* v = Find(ch)) {
      for (size_t i = 0; i < dimension_; ++i) sum[i] += (*v)[i];
      ++found;
    }
  }
  if (found == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(found);
  return sum;
}

void ResourceBundle::Finalize() {
  reassembly_table.clear();
  for (const auto& [ch, comp] : disassembly_table) {
    if (CodepointCount(comp) < 2) {
      throw Error(ErrorCode::kParse,
                  "disassembly of " + ch + " has fewer than 2 components");
    }
    auto [it, inserted] = reassembly_table.emplace(comp, ch);
    if (!inserted) {
      throw Error(ErrorCode::kParse, "components " + comp +
                                         " are shared by " + it->second +
                                         " and " + ch);
    }
  }

  for (const auto& [ch, list] : visual_neighbors) {
    for (size_t i = 0; i < list.size(); ++i) {
      if (list[i].score < 0.0 || list[i].score > 1.0) {
        throw Error(ErrorCode::kParse, "visual score outside [0,1] for " + ch);
      }
      if (i > 0 && list[i].score > list[i - 1].score) {
        throw Error(ErrorCode::kParse, "visual neighbours of " + ch +
                                           " are not sorted by score");
      }
    }
  }

  for (const auto& [word, freq] : vocabulary.entries()) {
    for (char32_t cp : DecodeUtf8(word)) {
      if (IsHanzi(cp) && pinyin_table.find(EncodeUtf8(cp)) == pinyin_table.end()) {
        throw Error(ErrorCode::kParse, "vocabulary word " + word +
                                           " has a character without pinyin");
      }
    }
  }

  hanzify_index.clear();
  syllable_frequency.clear();
  for (const auto& [ch, syllables] : pinyin_table) {
    const int64_t freq = std::max<int64_t>(1, vocabulary.Frequency(ch));
    for (const std::string& s : syllables) {
      hanzify_index[s].push_back({ch, freq});
      syllable_frequency[s] += freq;
    }
  }
  for (auto& [s, entries] : hanzify_index) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const HanzifyEntry& a, const HanzifyEntry& b) {
                       if (a.frequency != b.frequency) {
                         return a.frequency > b.frequency;
                       }
                       return CodepointLess(a.character, b.character);
                     });
  }
}

ResourceBundle LoadResources(const std::filesystem::path& dir) {
  ResourceBundle bundle;

  for (const auto& [n, f] : ReadTsv(dir, "pinyin")) {
    if (CodepointCount(f[0]) != 1) {
      ParseFail("pinyin.tsv", n, "key must be a single character");
    }
    auto syllables = SplitOn(f[1], ',');
    for (const auto& s : syllables) {
      if (!IsSyllable(s)) ParseFail("pinyin.tsv", n, "bad syllable '" + s + "'");
    }
    bundle.pinyin_table[f[0]] = std::move(syllables);
  }

  for (const auto& [n, f] : ReadTsv(dir, "disassembly")) {
    if (CodepointCount(f[0]) != 1) {
      ParseFail("disassembly.tsv", n, "key must be a single character");
    }
    if (CodepointCount(f[1]) < 2) {
      ParseFail("disassembly.tsv", n, "needs at least two components");
    }
    bundle.disassembly_table[f[0]] = f[1];
  }

  for (const auto& [n, f] : ReadTsv(dir, "translations")) {
    auto words = SplitOn(f[1], '|');
    for (const auto& w : words) {
      if (!IsLowerLatinPhrase(w)) {
        ParseFail("translations.tsv", n, "bad translation '" + w + "'");
      }
    }
    bundle.translation_dict[f[0]] = std::move(words);
  }

  for (const auto& [n, f] : ReadTsv(dir, "phonemes")) {
    auto phones = SplitOnSpaces(f[1]);
    if (phones.empty()) ParseFail("phonemes.tsv", n, "no phonemes");
    bundle.phoneme_lexicon[f[0]] = std::move(phones);
  }

  for (const auto& [n, f] : ReadTsv(dir, "phoneme_map")) {
    std::vector<TransliterationSyllable> options;
    for (const auto& item : SplitOn(f[1], ',')) {
      const size_t slash = item.find('/');
      TransliterationSyllable opt;
      opt.syllable = item.substr(0, slash);
      if (slash != std::string::npos) opt.character = item.substr(slash + 1);
      if (!IsSyllable(opt.syllable)) {
        ParseFail("phoneme_map.tsv", n, "bad syllable '" + item + "'");
      }
      if (slash != std::string::npos && CodepointCount(opt.character) != 1) {
        ParseFail("phoneme_map.tsv", n, "bad character in '" + item + "'");
      }
      options.push_back(std::move(opt));
    }
    bundle.phoneme_map[f[0]] = std::move(options);
  }

  for (const auto& [n, f] : ReadTsv(dir, "visual")) {
    std::vector<VisualNeighbor> list;
    for (const auto& item : SplitOn(f[1], ',')) {
      const size_t colon = item.rfind(':');
      if (colon == std::string::npos || colon == 0) {
        ParseFail("visual.tsv", n, "expected neighbor:score, got '" + item + "'");
      }
      VisualNeighbor vn;
      vn.character = item.substr(0, colon);
      try {
        size_t used = 0;
        vn.score = std::stod(item.substr(colon + 1), &used);
        if (used != item.size() - colon - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        ParseFail("visual.tsv", n, "bad score in '" + item + "'");
      }
      if (vn.score < 0.0 || vn.score > 1.0) {
        ParseFail("visual.tsv", n, "score outside [0,1]");
      }
      if (!list.empty() && vn.score > list.back().score) {
        ParseFail("visual.tsv", n, "scores not sorted descending");
      }
      list.push_back(std::move(vn));
    }
    bundle.visual_neighbors[f[0]] = std::move(list);
  }

  for (const auto& [n, f] : ReadTsv(dir, "vocab")) {
    int64_t freq = 0;
    try {
      size_t used = 0;
      freq = std::stoll(f[1], &used);
      if (used != f[1].size() || freq < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      ParseFail("vocab.tsv", n, "bad frequency '" + f[1] + "'");
    }
    bundle.vocabulary.Add(f[0], freq);
  }

  for (const auto& [n, f] : ReadTsv(dir, "embeddings")) {
    std::vector<double> v;
    std::istringstream in(f[1]);
    std::string item;
    while (in >> item) {
      try {
        size_t used = 0;
        v.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        ParseFail("embeddings.tsv", n, "bad number '" + item + "'");
      }
    }
    try {
      bundle.embeddings.Add(f[0], std::move(v));
    } catch (const Error& e) {
      ParseFail("embeddings.tsv", n, e.what());
    }
  }

  bundle.Finalize();
  return bundle;
}

std::vector<Token> Segment(std::string_view text, const Vocabulary& vocab) {
  std::vector<Token> out;
  if (text.find(' ') != std::string_view::npos) {
    for (auto& piece : SplitOnSpaces(text)) {
      TokenKind kind = ClassifySurface(piece);
      out.push_back({std::move(piece), kind});
    }
    return out;
  }
  const std::vector<std::string> chars = SplitCodepoints(text);
  size_t i = 0;
  while (i < chars.size()) {
    const size_t longest = std::min(vocab.max_word_codepoints(), chars.size() - i);
    size_t taken = 1;
    std::string candidate;
    for (size_t len = longest; len >= 1; --len) {
      candidate.clear();
      for (size_t j = i; j < i + len; ++j) candidate += chars[j];
      if (vocab.Contains(candidate)) {
        taken = len;
        break;
      }
    }
    std::string surface;
    for (size_t j = i; j < i + taken; ++j) surface += chars[j];
    const TokenKind kind = ClassifySurface(surface);
    out.push_back({std::move(surface), kind});
    i += taken;
  }
  return out;
}

TokenKind ClassifySurface(std::string_view surface,
                          const ResourceBundle* bundle) {
  if (IsAllHanzi(surface)) return TokenKind::kHanziWord;
  if (IsLowerLatinPhrase(surface)) {
    if (bundle != nullptr) {
      bool all_syllables = true;
      for (const auto& unit : SplitOnSpaces(surface)) {
        if (bundle->hanzify_index.find(unit) == bundle->hanzify_index.end()) {
          all_syllables = false;
          break;
        }
      }
      if (all_syllables) return TokenKind::kPinyinSeq;
    }
    return TokenKind::kLatinWord;
  }
  return TokenKind::kOther;
}

Token PinyinOf(const Token& word, const ResourceBundle& bundle) {
  if (word.surface.empty()) {
    throw Error(ErrorCode::kPrecondition, "pinyin of an empty word");
  }
  std::vector<std::string> syllables;
  for (const std::string& ch : SplitCodepoints(word.surface)) {
    auto it = bundle.pinyin_table.find(ch);
    if (it == bundle.pinyin_table.end() || it->second.empty()) {
      throw Error(ErrorCode::kCoverage, "no pinyin for character " + ch);
    }
    syllables.push_back(it->second.front());
  }
  return {JoinSyllables(syllables), TokenKind::kPinyinSeq};
}

std::vector<Token> Hanzify(const Token& pinyin_seq, size_t k,
                           const ResourceBundle& bundle) {
  const auto syllables = SplitOnSpaces(pinyin_seq.surface);
  if (syllables.empty()) {
    throw Error(ErrorCode::kPrecondition, "hanzify of an empty pinyin sequence");
  }
  if (k == 0) return {};
  std::vector<const std::vector<HanzifyEntry>*> options;
  std::vector<std::vector<int64_t>> costs;
  for (const auto& s : syllables) {
    const auto& entries = HanzifyOptions(bundle, s);
    options.push_back(&entries);
    std::vector<int64_t> c;
    for (const auto& e : entries) {
      c.push_back(LogCost(entries.front().frequency, e.frequency));
    }
    costs.push_back(std::move(c));
  }
  auto spell = [&](const std::vector<size_t>& idx) {
    std::string s;
    for (size_t d = 0; d < idx.size(); ++d) s += (*options[d])[idx[d]].character;
    return s;
  };
  std::vector<Token> out;
  for (const auto& idx : internal::KBestCombinations(costs, k, spell)) {
    out.push_back({spell(idx), TokenKind::kHanziWord});
  }
  return out;
}

std::vector<Token> Translate(const Token& word, const ResourceBundle& bundle) {
  std::vector<Token> out;
  auto it = bundle.translation_dict.find(word.surface);
  if (it == bundle.translation_dict.end()) return out;
  for (const auto& en : it->second) out.push_back({en, TokenKind::kLatinWord});
  return out;
}

std::vector<Token> Transliterate(const Token& word, size_t k,
                                 const ResourceBundle& bundle) {
  std::vector<std::string> phones;
  const auto words = SplitOnSpaces(word.surface);
  if (words.empty()) {
    throw Error(ErrorCode::kPrecondition, "transliteration of an empty word");
  }
  for (const auto& w : words) {
    auto it = bundle.phoneme_lexicon.find(w);
    if (it == bundle.phoneme_lexicon.end()) {
      throw Error(ErrorCode::kCoverage, "'" + w + "' is not in the phoneme lexicon");
    }
    phones.insert(phones.end(), it->second.begin(), it->second.end());
  }

  // Greedy units: a consonant-vowel pair when the map knows it, else a
  // single phoneme.
  struct Option {
    std::string syllable;
    std::string character;
  };
  std::vector<std::vector<Option>> units;
  size_t i = 0;
  while (i < phones.size()) {
    const std::vector<TransliterationSyllable>* found = nullptr;
    size_t width = 1;
    if (i + 1 < phones.size()) {
      auto it = bundle.phoneme_map.find(phones[i] + " " + phones[i + 1]);
      if (it != bundle.phoneme_map.end()) {
        found = &it->second;
        width = 2;
      }
    }
    if (found == nullptr) {
      auto it = bundle.phoneme_map.find(phones[i]);
      if (it == bundle.phoneme_map.end()) {
        throw Error(ErrorCode::kCoverage, "phoneme " + phones[i] + " of '" +
                                              word.surface + "' is unmapped");
      }
      found = &it->second;
    }
    std::vector<Option> options;
    for (const auto& ts : *found) {
      if (options.size() == kTransliterationFanout) break;
      std::string ch = ts.character;
      if (ch.empty()) {
        auto h = bundle.hanzify_index.find(ts.syllable);
        if (h == bundle.hanzify_index.end() || h->second.empty()) continue;
        ch = h->second.front().character;
      }
      options.push_back({ts.syllable, std::move(ch)});
    }
    if (options.empty()) {
      throw Error(ErrorCode::kCoverage, "phoneme " + phones[i] + " of '" +
                                            word.surface + "' has no characters");
    }
    units.push_back(std::move(options));
    i += width;
  }

  if (k == 0) return {};
  std::vector<std::vector<int64_t>> costs;
  for (const auto& u : units) {
    std::vector<int64_t> c(u.size());
    for (size_t r = 0; r < u.size(); ++r) c[r] = static_cast<int64_t>(r);
    costs.push_back(std::move(c));
  }
  auto syllable_key = [&](const std::vector<size_t>& idx) {
    std::vector<std::string> parts;
    for (size_t d = 0; d < idx.size(); ++d) parts.push_back(units[d][idx[d]].syllable);
    return JoinSyllables(parts);
  };
  std::vector<Token> out;
  for (const auto& idx : internal::KBestCombinations(costs, k * 4, syllable_key)) {
    std::string hanzi;
    for (size_t d = 0; d < idx.size(); ++d) hanzi += units[d][idx[d]].character;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Token& t) { return t.surface == hanzi; });
    if (!seen) out.push_back({std::move(hanzi), TokenKind::kHanziWord});
    if (out.size() == k) break;
  }
  return out;
}

Token Acronym(const Token& seq) {
  const auto units = SplitOnSpaces(seq.surface);
  if (units.empty()) {
    throw Error(ErrorCode::kPrecondition, "acronym of an empty sequence");
  }
  std::string out;
  for (const auto& u : units) {
    char c = u.front();
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return {out, TokenKind::kAcronym};
}

std::vector<Token> FuzzyExpand(const Token& acronym, size_t limit,
                               const ResourceBundle& bundle) {
  if (acronym.surface.empty()) {
    throw Error(ErrorCode::kPrecondition, "fuzzy expansion of an empty acronym");
  }
  std::vector<std::vector<std::pair<std::string, int64_t>>> options;
  for (char letter : acronym.surface) {
    std::vector<std::pair<std::string, int64_t>> syllables;
    if (letter >= 'a' && letter <= 'z') {
      for (const auto& [s, f] : bundle.syllable_frequency) {
        if (s.front() == letter) syllables.emplace_back(s, f);
      }
    }
    if (syllables.empty()) {
      throw Error(ErrorCode::kCoverage,
                  std::string("no pinyin syllable begins with '") + letter + "'");
    }
    std::stable_sort(syllables.begin(), syllables.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    options.push_back(std::move(syllables));
  }
  std::vector<std::vector<int64_t>> costs;
  for (const auto& o : options) {
    std::vector<int64_t> c;
    for (const auto& [s, f] : o) c.push_back(o.front().second - f);
    costs.push_back(std::move(c));
  }
  auto spell = [&](const std::vector<size_t>& idx) {
    std::vector<std::string> parts;
    for (size_t d = 0; d < idx.size(); ++d) parts.push_back(options[d][idx[d]].first);
    return JoinSyllables(parts);
  };
  std::vector<Token> out;
  for (const auto& idx : internal::KBestCombinations(costs, limit, spell)) {
    out.push_back({spell(idx), TokenKind::kPinyinSeq});
  }
  return out;
}

std::optional<Token> Disassemble(std::string_view character,
                                 const ResourceBundle& bundle) {
  auto it = bundle.disassembly_table.find(character);
  if (it == bundle.disassembly_table.end()) return std::nullopt;
  return Token{it->second, TokenKind::kComponentSeq};
}

std::optional<std::string> Reassemble(std::string_view components,
                                      const ResourceBundle& bundle) {
  auto it = bundle.reassembly_table.find(components);
  if (it == bundle.reassembly_table.end()) return std::nullopt;
  return it->second;
}

std::vector<VisualNeighbor> VisualNeighbors(std::string_view character,
                                            size_t k,
                                            const ResourceBundle& bundle) {
  auto it = bundle.visual_neighbors.find(character);
  if (it == bundle.visual_neighbors.end()) return {};
  const auto& list = it->second;
  return {list.begin(), list.begin() + static_cast<std::ptrdiff_t>(std::min(k, list.size()))};
}

}  // namespace chainattack
