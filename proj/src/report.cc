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

namespace chainattack {
namespace {

Json RulesToJson(const std::vector<Rule>& rules) {
  Json out = Json::array();
  for (Rule r : rules) out.push_back(std::string(RuleName(r)));
  return out;
}

}  // namespace

Json ToJson(const PsoConfig& c) {
  return Json{{"swarm_size", c.swarm_size}, {"t_max", c.t_max},
              {"omega_max", c.omega_max},   {"omega_min", c.omega_min},
              {"p_min", c.p_min},           {"p_max", c.p_max},
              {"phi1", c.phi1},             {"phi2", c.phi2},
              {"seed", c.seed},             {"early_stop", c.early_stop},
              {"target_fraction", c.target_fraction}};
}

Json ToJson(const ExpansionConfig& c) {
  Json caps = Json::object();
  for (Rule r : kAllRules) {
    if (c.fanout_caps.count(r)) caps[std::string(RuleName(r))] = c.fanout_caps.at(r);
  }
  Json enabled = Json::array();
  for (Rule r : kAllRules) {
    if (c.enabled(r)) enabled.push_back(std::string(RuleName(r)));
  }
  return Json{{"max_depth", c.max_depth}, {"fanout_caps", caps}, {"enabled_rules", enabled}};
}

Json ToJson(const EvalRow& row) {
  Json out{{"model", row.model},
           {"examples", row.examples},
           {"clean_acc", row.clean_acc},
           {"attacked_acc", row.attacked_acc},
           {"successes", row.successes}};
  out["mean_wmd"] = row.mean_wmd ? Json(*row.mean_wmd) : Json(nullptr);
  out["wmd_undefined"] = row.wmd_undefined;
  out["mean_queries"] = row.mean_queries;
  return out;
}

Json TokensToJson(const std::vector<Token>& tokens) {
  Json out = Json::array();
  for (const Token& t : tokens) {
    out.push_back(Json{{"surface", t.surface}, {"kind", std::string(TokenKindName(t.kind))}});
  }
  return out;
}

std::vector<Token> TokensFromJson(const Json& tokens) {
  std::vector<Token> out;
  for (const Json& t : tokens) {
    out.push_back({t.at("surface").get<std::string>(),
                   ParseTokenKind(t.at("kind").get<std::string>())});
  }
  return out;
}

Json ToJson(const AttackResult& r) {
  Json chains = Json::array();
  for (const Substitution& s : r.substitutions) {
    chains.push_back(Json{{"index", s.index},
                          {"from", s.from},
                          {"to", s.to},
                          {"kind", std::string(TokenKindName(s.kind))},
                          {"rules", RulesToJson(s.rules)}});
  }
  Json history = Json::array();
  for (double h : r.history) history.push_back(h);
  return Json{
      {"status", r.status == AttackStatus::kAttacked ? "attacked" : "no-candidates"},
      {"original", RenderTokens(r.original)},
      {"adversarial", RenderTokens(r.adversarial)},
      {"true_label", r.true_label},
      {"original_label", r.original_label},
      {"original_confidence", r.original_confidence},
      {"label", r.label},
      {"confidence", r.confidence},
      {"success", r.success},
      {"score", r.score},
      {"layers", r.layers},
      {"chains", chains},
      {"queries", r.queries},
      {"iterations", r.iterations},
      {"history", history},
      {"original_tokens", TokensToJson(r.original)},
      {"adversarial_tokens", TokensToJson(r.adversarial)},
  };
}

AttackResult AttackResultFromJson(const Json& j) {
  try {
    AttackResult r;
    const std::string status = j.at("status").get<std::string>();
    if (status == "attacked") {
      r.status = AttackStatus::kAttacked;
    } else if (status == "no-candidates") {
      r.status = AttackStatus::kNoCandidates;
    } else {
      throw Error(ErrorCode::kParse, "unknown attack status '" + status + "'");
    }
    r.original = TokensFromJson(j.at("original_tokens"));
    r.adversarial = TokensFromJson(j.at("adversarial_tokens"));
    r.true_label = j.at("true_label").get<int>();
    r.original_label = j.at("original_label").get<int>();
    r.original_confidence = j.at("original_confidence").get<double>();
    r.label = j.at("label").get<int>();
    r.confidence = j.at("confidence").get<double>();
    r.success = j.at("success").get<bool>();
    r.score = j.at("score").get<double>();
    r.layers = j.at("layers").get<int>();
    r.queries = j.at("queries").get<size_t>();
    r.iterations = j.at("iterations").get<int>();
    for (const Json& c : j.at("chains")) {
      Substitution s;
      s.index = c.at("index").get<size_t>();
      s.from = c.at("from").get<std::string>();
      s.to = c.at("to").get<std::string>();
      s.kind = ParseTokenKind(c.at("kind").get<std::string>());
      for (const Json& rule : c.at("rules")) s.rules.push_back(ParseRule(rule.get<std::string>()));
      r.substitutions.push_back(std::move(s));
    }
    for (const Json& h : j.at("history")) r.history.push_back(h.get<double>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed attack record: ") + e.what());
  }
}

Json ToJson(const RecoveryReport& report, const std::vector<Token>& input) {
  Json replacements = Json::array();
  for (const Replacement& r : report.replacements) {
    replacements.push_back(Json{{"position", r.position},
                                {"abnormal", r.abnormal},
                                {"chosen", r.chosen},
                                {"distance", r.distance}});
  }
  Json unresolved = Json::array();
  for (size_t p : report.unresolved) unresolved.push_back(p);
  return Json{{"input", RenderTokens(input)},
              {"recovered", RenderTokens(report.recovered)},
              {"replacements", replacements},
              {"unresolved", unresolved},
              {"input_tokens", TokensToJson(input)},
              {"recovered_tokens", TokensToJson(report.recovered)}};
}

}  // namespace chainattack
