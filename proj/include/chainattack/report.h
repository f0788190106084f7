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

#ifndef CHAINATTACK_REPORT_H_
#define CHAINATTACK_REPORT_H_

#include <string>
#include <vector>

#include "chainattack/assoc_graph.h"
#include "chainattack/attack.h"
#include "chainattack/defense.h"
#include "chainattack/eval.h"
#include "json.hpp"

namespace chainattack {

using Json = nlohmann::ordered_json;

Json ToJson(const PsoConfig& config);
Json ToJson(const ExpansionConfig& config);
Json ToJson(const EvalRow& row);
Json TokensToJson(const std::vector<Token>& tokens);

// Attack record: texts, tokens, labels, score, layers, chains, queries.
Json ToJson(const AttackResult& result);
// Inverse of ToJson for the fields later stages read back. Throws
// Error(kParse).
AttackResult AttackResultFromJson(const Json& record);

Json ToJson(const RecoveryReport& report, const std::vector<Token>& input);

std::vector<Token> TokensFromJson(const Json& tokens);

}  // namespace chainattack

#endif  // CHAINATTACK_REPORT_H_
