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

#ifndef CHAINATTACK_UTF8_H_
#define CHAINATTACK_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace chainattack {

// Throws Error(kParse) on malformed input.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(char32_t cp);
std::string EncodeUtf8(std::u32string_view cps);

// One string per code point, in order.
std::vector<std::string> SplitCodepoints(std::string_view text);

size_t CodepointCount(std::string_view text);

// CJK unified ideographs, extension A/B and the compatibility block.
bool IsHanzi(char32_t cp);
bool IsAllHanzi(std::string_view text);

bool IsAsciiAlnum(char32_t cp);

// Lowercase ASCII letters separated by single spaces, e.g. "you zhi".
bool IsLowerLatinPhrase(std::string_view text);

std::vector<std::string> SplitOnSpaces(std::string_view text);

// Orders strings by code point sequence; for valid UTF-8 this is the same as
// byte order, which is what the tie-breaks rely on.
inline bool CodepointLess(std::string_view a, std::string_view b) {
  return a < b;
}

}  // namespace chainattack

#endif  // CHAINATTACK_UTF8_H_
