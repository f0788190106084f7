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

// chainattack: command-line workflows over the library.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chainattack/assoc_graph.h"
#include "chainattack/attack.h"
#include "chainattack/defense.h"
#include "chainattack/error.h"
#include "chainattack/eval.h"
#include "chainattack/lexicon.h"
#include "chainattack/remote_oracle.h"
#include "chainattack/report.h"
#include "chainattack/rng.h"
#include "chainattack/victim.h"

namespace ca = chainattack;
using ca::Json;

namespace {

struct OracleOptions {
  std::string model;
  std::string endpoint;
  double timeout = 10.0;
  int attempts = 1;
  int backoff_ms = 0;
  std::string classes;
};

void AddOracleOptions(CLI::App* cmd, OracleOptions& o) {
  auto* model = cmd->add_option("--model", o.model, "Built-in victim model file");
  auto* endpoint = cmd->add_option("--endpoint", o.endpoint, "Remote oracle URL (http://host:port/path)");
  model->excludes(endpoint);
  cmd->add_option("--timeout", o.timeout, "Remote oracle timeout in seconds")->capture_default_str();
  cmd->add_option("--attempts", o.attempts, "Remote oracle attempts per query")->capture_default_str();
  cmd->add_option("--backoff-ms", o.backoff_ms, "Delay between remote attempts")->capture_default_str();
}

Json ToJson(const OracleOptions& o) {
  Json j;
  if (!o.model.empty()) j["model"] = o.model;
  if (!o.endpoint.empty()) {
    j["endpoint"] = o.endpoint;
    j["timeout"] = o.timeout;
    j["attempts"] = o.attempts;
    j["backoff_ms"] = o.backoff_ms;
  }
  return j;
}

std::unique_ptr<ca::VictimOracle> OpenOracle(const OracleOptions& o,
                                             const std::vector<std::string>& classes) {
  if (!o.model.empty()) return std::make_unique<ca::NGramClassifier>(ca::LoadModel(o.model));
  if (o.endpoint.empty()) {
    throw ca::Error(ca::ErrorCode::kPrecondition, "one of --model or --endpoint is required");
  }
  ca::RemoteOracleConfig config;
  config.url = o.endpoint;
  config.timeout_seconds = o.timeout;
  config.retry = {o.attempts, o.backoff_ms};
  config.class_names = classes;
  return std::make_unique<ca::RemoteOracle>(config);
}

ca::LabeledDataset LoadLabeled(const std::string& path, const std::string& classes_path) {
  std::vector<std::string> classes;
  if (!classes_path.empty()) classes = ca::LoadClassNames(classes_path);
  return ca::LoadDataset(path, classes);
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ca::Error(ca::ErrorCode::kIo, "cannot write " + path);
  return out;
}

void WriteLine(std::ofstream& out, const Json& j) {
  out << j.dump() << '\n';
  out.flush();
}

// Artifacts without room for a header get the config alongside them.
void WriteSidecar(const std::string& path, const Json& config) {
  std::ofstream out = OpenOut(path + ".config.json");
  out << config.dump(2) << '\n';
}

std::vector<Json> ReadJsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ca::Error(ca::ErrorCode::kIo, "cannot open " + path);
  std::vector<Json> out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ca::Error(ca::ErrorCode::kParse, path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ca::AttackResult> ReadAttackReport(const std::string& path) {
  std::vector<ca::AttackResult> out;
  for (const Json& j : ReadJsonl(path)) {
    if (j.value("type", "") == "attack") out.push_back(ca::AttackResultFromJson(j));
  }
  return out;
}

// name=path
std::pair<std::string, std::string> SplitNamed(const std::string& arg) {
  const size_t eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) {
    throw ca::Error(ca::ErrorCode::kPrecondition, "expected NAME=PATH, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

struct GraphOptions {
  int depth = 3;
  std::vector<std::string> caps;
  std::vector<std::string> rules;
};

void AddGraphOptions(CLI::App* cmd, GraphOptions& g) {
  cmd->add_option("--depth", g.depth, "Maximum association depth")->capture_default_str();
  cmd->add_option("--cap", g.caps, "Fanout cap override, RULE=N (repeatable)");
  cmd->add_option("--rules", g.rules, "Enabled rules (default: all)");
}

ca::ExpansionConfig MakeExpansionConfig(const GraphOptions& g) {
  ca::ExpansionConfig config = ca::ExpansionConfig::Defaults();
  config.max_depth = g.depth;
  if (!g.rules.empty()) {
    config.enabled_rules.clear();
    for (const auto& r : g.rules) config.enabled_rules.insert(ca::ParseRule(r));
  }
  for (const auto& arg : g.caps) {
    const auto [rule, value] = SplitNamed(arg);
    config.fanout_caps[ca::ParseRule(rule)] = std::stoul(value);
  }
  config.Validate();
  return config;
}

void AddPsoOptions(CLI::App* cmd, ca::PsoConfig& p) {
  cmd->add_option("--swarm", p.swarm_size, "Particles")->capture_default_str();
  cmd->add_option("--t-max", p.t_max, "Iterations")->capture_default_str();
  cmd->add_option("--omega-max", p.omega_max)->capture_default_str();
  cmd->add_option("--omega-min", p.omega_min)->capture_default_str();
  cmd->add_option("--p-min", p.p_min)->capture_default_str();
  cmd->add_option("--p-max", p.p_max)->capture_default_str();
  cmd->add_option("--phi1", p.phi1)->capture_default_str();
  cmd->add_option("--phi2", p.phi2)->capture_default_str();
  cmd->add_option("--seed", p.seed, "Base seed; example i uses a stream derived from it")
      ->capture_default_str();
  cmd->add_flag("--early-stop", p.early_stop, "Stop at the first label flip");
  cmd->add_option("--target-fraction", p.target_fraction, "Share of words to perturb")
      ->capture_default_str();
}

ca::AttackResult AttackExample(const ca::LabeledExample& ex, size_t index,
                               const ca::VictimOracle& oracle, const ca::ResourceBundle& bundle,
                               const ca::ExpansionConfig& graph, const ca::PsoConfig& pso) {
  ca::PsoConfig config = pso;
  config.seed = ca::SplitSeed(pso.seed, index);
  return ca::PsoAttack(ca::Segment(ex.text, bundle.vocabulary), ex.label, oracle, bundle,
                       graph, config);
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string train;
  std::string test;
  std::string classes;
  std::string out;
  ca::TrainConfig config;
};

int RunTrain(const TrainArgs& a) {
  const ca::LabeledDataset train = LoadLabeled(a.train, a.classes);
  const ca::NGramClassifier model = ca::Train(train, a.config);
  Json config{{"command", "train-victim"},
              {"train", a.train},
              {"epochs", a.config.epochs},
              {"learning_rate", a.config.learning_rate},
              {"l2", a.config.l2},
              {"seed", a.config.seed},
              {"num_buckets", a.config.ngram.num_buckets}};
  ca::SaveModel(model, a.out, config.dump());
  Json summary{{"train_acc", ca::Accuracy(model, train)}};
  if (!a.test.empty()) {
    summary["test_acc"] = ca::Accuracy(model, LoadLabeled(a.test, a.classes));
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

struct GraphArgs {
  std::string resources;
  std::string words;
  std::string out;
  GraphOptions graph;
};

int RunBuildGraph(const GraphArgs& a) {
  const ca::ResourceBundle bundle = ca::LoadResources(a.resources);
  const ca::ExpansionConfig config = MakeExpansionConfig(a.graph);
  std::ifstream in(a.words, std::ios::binary);
  if (!in) throw ca::Error(ca::ErrorCode::kIo, "cannot open " + a.words);
  std::vector<ca::AssocGraph> graphs;
  ca::ExpansionStats stats;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    graphs.push_back(ca::ExpandWord({line, ca::TokenKind::kHanziWord}, bundle, config, &stats));
  }
  const ca::AssocGraph merged = graphs.empty() ? ca::AssocGraph(config) : ca::Merge(graphs);
  std::ofstream out = OpenOut(a.out);
  out << ca::Serialize(merged);
  std::cout << Json{{"roots", merged.roots().size()},
                    {"nodes", merged.nodes().size()},
                    {"edges", merged.edges().size()},
                    {"skipped", stats.skipped}}
                   .dump()
            << '\n';
  return 0;
}

struct AttackArgs {
  std::string resources;
  std::string dataset;
  std::string out;
  int attacked_label = 1;
  int jobs = 1;
  OracleOptions oracle;
  GraphOptions graph;
  ca::PsoConfig pso;
};

int RunAttack(const AttackArgs& a) {
  const ca::ResourceBundle bundle = ca::LoadResources(a.resources);
  const ca::ExpansionConfig graph = MakeExpansionConfig(a.graph);
  a.pso.Validate();
  const ca::LabeledDataset data = LoadLabeled(a.dataset, a.oracle.classes);
  const auto oracle = OpenOracle(a.oracle, data.class_names);

  std::vector<size_t> indices;
  for (size_t i = 0; i < data.examples.size(); ++i) {
    if (a.attacked_label < 0 || data.examples[i].label == a.attacked_label) indices.push_back(i);
  }

  std::ofstream out = OpenOut(a.out);
  WriteLine(out, Json{{"type", "config"},
                      {"command", "attack"},
                      {"dataset", a.dataset},
                      {"resources", a.resources},
                      {"oracle", ToJson(a.oracle)},
                      {"attacked_label", a.attacked_label},
                      {"seed", a.pso.seed},
                      {"pso", ca::ToJson(a.pso)},
                      {"graph", ca::ToJson(graph)}});

  std::vector<std::optional<ca::AttackResult>> done(indices.size());
  std::mutex mu;
  size_t written = 0;
  std::optional<ca::Error> failure;
  try {
    ca::ParallelFor(indices.size(), a.jobs, [&](size_t k) {
      ca::AttackResult r =
          AttackExample(data.examples[indices[k]], indices[k], *oracle, bundle, graph, a.pso);
      std::lock_guard<std::mutex> lock(mu);
      done[k] = std::move(r);
      while (written < done.size() && done[written]) {
        Json record{{"type", "attack"}, {"index", indices[written]}};
        record.update(ca::ToJson(*done[written]));
        WriteLine(out, record);
        ++written;
      }
    });
  } catch (const ca::Error& e) {
    failure = e;
  }
  if (failure) {
    std::cerr << "error: " << failure->what() << " (" << written << " of " << indices.size()
              << " records written)\n";
    return 1;
  }

  std::vector<ca::AttackResult> results;
  for (auto& r : done) results.push_back(std::move(*r));
  Json summary{{"type", "summary"}};
  if (results.empty()) {
    summary["examples"] = 0;
  } else {
    const ca::EvalRow row = ca::SummarizeAttacks(
        a.oracle.model.empty() ? a.oracle.endpoint : a.oracle.model, results, bundle.embeddings);
    summary.update(ca::ToJson(row));
    summary["success_rate"] =
        static_cast<double>(row.successes) / static_cast<double>(row.examples);
  }
  WriteLine(out, summary);
  std::cout << summary.dump() << '\n';
  return 0;
}

struct DefendArgs {
  std::string mode;
  std::string resources;
  std::string report;
  std::string dataset;
  std::string clean;
  std::string train;
  std::string out;
  std::string out_dataset;
  std::string out_model;
  double fraction = 0.3;
  int attacked_label = 1;
  OracleOptions oracle;
  GraphOptions graph;
  ca::PsoConfig pso;
  ca::TrainConfig train_config;
};

std::vector<ca::TokenizedExample> Tokenize(const ca::LabeledDataset& data,
                                           const ca::ResourceBundle& bundle) {
  std::vector<ca::TokenizedExample> out;
  for (const auto& ex : data.examples) {
    out.push_back({ca::Segment(ex.text, bundle.vocabulary), ex.label});
  }
  return out;
}

std::vector<ca::TokenizedExample> Perturbed(const std::vector<ca::AttackResult>& results) {
  std::vector<ca::TokenizedExample> out;
  for (const auto& r : results) out.push_back({r.adversarial, r.true_label});
  return out;
}

int RunAgbr(const DefendArgs& a) {
  const ca::ResourceBundle bundle = ca::LoadResources(a.resources);
  const ca::RecoveryIndex index(bundle);
  if (a.report.empty() == a.dataset.empty()) {
    throw ca::Error(ca::ErrorCode::kPrecondition, "agbr needs exactly one of --report or --dataset");
  }
  std::vector<ca::TokenizedExample> items;
  if (!a.report.empty()) {
    items = Perturbed(ReadAttackReport(a.report));
  } else {
    items = Tokenize(LoadLabeled(a.dataset, a.oracle.classes), bundle);
  }

  std::ofstream out = OpenOut(a.out);
  WriteLine(out, Json{{"type", "config"},
                      {"command", "defend"},
                      {"mode", "agbr"},
                      {"resources", a.resources},
                      {"input", a.report.empty() ? a.dataset : a.report},
                      {"clean", a.clean},
                      {"oracle", ToJson(a.oracle)},
                      {"max_depth", index.max_depth()},
                      {"seed", nullptr}});
  size_t replaced = 0;
  size_t unresolved = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const ca::RecoveryReport rep = ca::AgbrRecover(items[i].tokens, index);
    replaced += rep.replacements.size();
    unresolved += rep.unresolved.size();
    Json record{{"type", "recovery"}, {"index", i}, {"label", items[i].label}};
    record.update(ca::ToJson(rep, items[i].tokens));
    WriteLine(out, record);
  }

  Json summary{{"type", "summary"},
               {"records", items.size()},
               {"replaced", replaced},
               {"unresolved", unresolved}};
  if (!a.oracle.model.empty() || !a.oracle.endpoint.empty()) {
    const auto oracle = OpenOracle(a.oracle, {});
    const auto before = ca::OracleClassifier(*oracle);
    const auto after = ca::RecoveringClassifier(*oracle, index);
    if (!items.empty()) {
      const double b = ca::TokenAccuracy(before, items);
      const double f = ca::TokenAccuracy(after, items);
      summary[a.report.empty() ? "all_before" : "adv_before"] = b;
      summary[a.report.empty() ? "all_after" : "adv_after"] = f;
      summary[a.report.empty() ? "delta_all" : "delta_adv"] = f - b;
    }
    if (!a.clean.empty()) {
      const auto clean = Tokenize(LoadLabeled(a.clean, a.oracle.classes), bundle);
      const double b = ca::TokenAccuracy(before, clean);
      const double f = ca::TokenAccuracy(after, clean);
      summary["all_before"] = b;
      summary["all_after"] = f;
      summary["delta_all"] = f - b;
    }
  }
  WriteLine(out, summary);
  std::cout << summary.dump() << '\n';
  return 0;
}

int RunAt(const DefendArgs& a) {
  if (a.oracle.model.empty()) {
    throw ca::Error(ca::ErrorCode::kPrecondition, "at needs --model (the victim to retrain)");
  }
  if (a.train.empty() || a.report.empty() || a.out_dataset.empty() || a.out_model.empty()) {
    throw ca::Error(ca::ErrorCode::kPrecondition,
                    "at needs --train, --report, --out-dataset and --out-model");
  }
  const ca::ResourceBundle bundle = ca::LoadResources(a.resources);
  const ca::ExpansionConfig graph = MakeExpansionConfig(a.graph);
  a.pso.Validate();
  const ca::NGramClassifier before = ca::LoadModel(a.oracle.model);
  const ca::LabeledDataset train = LoadLabeled(a.train, a.oracle.classes);

  const ca::AugmentationPlan plan{a.fraction, a.attacked_label, a.pso.seed};
  const ca::AugmentationResult aug = ca::Augment(
      train, plan,
      [&](const ca::LabeledExample& ex, size_t i) -> std::optional<std::string> {
        const ca::AttackResult r = AttackExample(ex, i, before, bundle, graph, a.pso);
        if (!r.success) return std::nullopt;
        return ca::RenderTokens(r.adversarial);
      });
  const ca::NGramClassifier after = ca::Train(aug.dataset, a.train_config);

  Json config{{"command", "defend"},
              {"mode", "at"},
              {"resources", a.resources},
              {"model", a.oracle.model},
              {"train", a.train},
              {"report", a.report},
              {"clean", a.clean},
              {"fraction", a.fraction},
              {"attacked_label", a.attacked_label},
              {"seed", a.pso.seed},
              {"pso", ca::ToJson(a.pso)},
              {"graph", ca::ToJson(graph)},
              {"epochs", a.train_config.epochs},
              {"learning_rate", a.train_config.learning_rate},
              {"l2", a.train_config.l2},
              {"train_seed", a.train_config.seed}};
  ca::SaveDataset(aug.dataset, a.out_dataset);
  WriteSidecar(a.out_dataset, config);
  ca::SaveModel(after, a.out_model, config.dump());

  const auto perturbed = Perturbed(ReadAttackReport(a.report));
  Json summary{{"type", "summary"},
               {"selected", aug.selected.size()},
               {"replaced", aug.replaced},
               {"adv_before", ca::TokenAccuracy(ca::OracleClassifier(before), perturbed)},
               {"adv_after", ca::TokenAccuracy(ca::OracleClassifier(after), perturbed)}};
  summary["delta_adv"] = summary["adv_after"].get<double>() - summary["adv_before"].get<double>();
  if (!a.clean.empty()) {
    const ca::LabeledDataset clean = LoadLabeled(a.clean, a.oracle.classes);
    summary["all_before"] = ca::Accuracy(before, clean);
    summary["all_after"] = ca::Accuracy(after, clean);
    summary["delta_all"] = summary["all_after"].get<double>() - summary["all_before"].get<double>();
  }
  if (!a.out.empty()) {
    std::ofstream out = OpenOut(a.out);
    Json record{{"type", "config"}};
    record.update(config);
    WriteLine(out, record);
    WriteLine(out, summary);
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

struct TransferArgs {
  std::vector<std::string> adv;
  std::vector<std::string> models;
  std::string out;
};

int RunTransfer(const TransferArgs& a) {
  std::vector<ca::AdversarialSet> sets;
  for (const auto& arg : a.adv) {
    const auto [name, path] = SplitNamed(arg);
    ca::AdversarialSet set{name, {}};
    for (const auto& r : ReadAttackReport(path)) {
      if (r.success) set.examples.push_back({ca::RenderTokens(r.adversarial), r.true_label});
    }
    sets.push_back(std::move(set));
  }
  std::vector<ca::NGramClassifier> models;
  std::vector<std::string> names;
  for (const auto& arg : a.models) {
    const auto [name, path] = SplitNamed(arg);
    names.push_back(name);
    models.push_back(ca::LoadModel(path));
  }
  std::vector<ca::NamedOracle> targets;
  for (size_t i = 0; i < models.size(); ++i) targets.push_back({names[i], &models[i]});
  const ca::TransferTable table = ca::TransferMatrix(sets, targets);
  std::ofstream out = OpenOut(a.out);
  out << ca::TransferTsv(table);
  WriteSidecar(a.out, Json{{"command", "transfer"}, {"adv", a.adv}, {"models", a.models},
                           {"seed", nullptr}});
  std::cout << ca::TransferTsv(table);
  return 0;
}

struct EvalArgs {
  std::string resources;
  std::vector<std::string> reports;
  std::string out;
};

int RunEval(const EvalArgs& a) {
  const ca::ResourceBundle bundle = ca::LoadResources(a.resources);
  std::ofstream out = OpenOut(a.out);
  out << ca::EvalRowTsvHeader() << '\n';
  Json seeds = Json::object();
  for (const auto& arg : a.reports) {
    const auto [name, path] = SplitNamed(arg);
    for (const Json& j : ReadJsonl(path)) {
      if (j.value("type", "") == "config" && j.contains("seed")) seeds[name] = j["seed"];
    }
    const ca::EvalRow row = ca::SummarizeAttacks(name, ReadAttackReport(path), bundle.embeddings);
    out << ca::EvalRowTsv(row) << '\n';
    std::cout << ca::ToJson(row).dump() << '\n';
  }
  WriteSidecar(a.out, Json{{"command", "eval"}, {"resources", a.resources},
                           {"reports", a.reports}, {"seed", seeds}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chain-association adversarial attacks and defenses for Chinese text"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-victim", "Train the built-in n-gram victim");
  train_cmd->add_option("--train", train.train, "Training TSV (label<TAB>text)")->required();
  train_cmd->add_option("--test", train.test, "Optional held-out TSV for reporting");
  train_cmd->add_option("--classes", train.classes, "Class names, one per line");
  train_cmd->add_option("--out", train.out, "Model file")->required();
  train_cmd->add_option("--epochs", train.config.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--l2", train.config.l2)->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed)->capture_default_str();
  train_cmd->add_option("--buckets", train.config.ngram.num_buckets)->capture_default_str();

  GraphArgs graph;
  auto* graph_cmd = app.add_subcommand("build-graph", "Expand words into an association graph");
  graph_cmd->add_option("--resources", graph.resources, "Resource bundle directory")->required();
  graph_cmd->add_option("--words", graph.words, "One hanzi word per line")->required();
  graph_cmd->add_option("--out", graph.out, "Graph file (JSON lines)")->required();
  AddGraphOptions(graph_cmd, graph.graph);

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "Run the swarm attack over a dataset");
  attack_cmd->add_option("--resources", attack.resources)->required();
  attack_cmd->add_option("--dataset", attack.dataset, "TSV to attack")->required();
  attack_cmd->add_option("--classes", attack.oracle.classes, "Class names, one per line");
  attack_cmd->add_option("--out", attack.out, "Attack report (JSON lines)")->required();
  attack_cmd->add_option("--attacked-label", attack.attacked_label,
                         "Only attack this class; -1 for all")
      ->capture_default_str();
  attack_cmd->add_option("--jobs", attack.jobs, "Examples attacked in parallel")
      ->capture_default_str();
  AddOracleOptions(attack_cmd, attack.oracle);
  AddGraphOptions(attack_cmd, attack.graph);
  AddPsoOptions(attack_cmd, attack.pso);

  DefendArgs defend;
  auto* defend_cmd = app.add_subcommand("defend", "Graph-based recovery or adversarial training");
  defend_cmd->add_option("--mode", defend.mode)->required()->check(CLI::IsMember({"agbr", "at"}));
  defend_cmd->add_option("--resources", defend.resources)->required();
  defend_cmd->add_option("--report", defend.report, "Attack report to recover or evaluate on");
  defend_cmd->add_option("--dataset", defend.dataset, "TSV to recover (agbr)");
  defend_cmd->add_option("--clean", defend.clean, "Clean labelled TSV for the overall accuracy");
  defend_cmd->add_option("--classes", defend.oracle.classes, "Class names, one per line");
  defend_cmd->add_option("--train", defend.train, "Training TSV to augment (at)");
  defend_cmd->add_option("--out", defend.out, "Recovered JSON lines (agbr) or summary (at)");
  defend_cmd->add_option("--out-dataset", defend.out_dataset, "Augmented TSV (at)");
  defend_cmd->add_option("--out-model", defend.out_model, "Retrained model (at)");
  defend_cmd->add_option("--fraction", defend.fraction, "Share of attacked-class examples replaced")
      ->capture_default_str();
  defend_cmd->add_option("--attacked-label", defend.attacked_label)->capture_default_str();
  defend_cmd->add_option("--epochs", defend.train_config.epochs)->capture_default_str();
  defend_cmd->add_option("--lr", defend.train_config.learning_rate)->capture_default_str();
  defend_cmd->add_option("--l2", defend.train_config.l2)->capture_default_str();
  defend_cmd->add_option("--train-seed", defend.train_config.seed)->capture_default_str();
  AddOracleOptions(defend_cmd, defend.oracle);
  AddGraphOptions(defend_cmd, defend.graph);
  AddPsoOptions(defend_cmd, defend.pso);

  TransferArgs transfer;
  auto* transfer_cmd = app.add_subcommand("transfer", "Accuracy of models on each other's attacks");
  transfer_cmd->add_option("--adv", transfer.adv, "NAME=attack report (repeatable)")->required();
  transfer_cmd->add_option("--model", transfer.models, "NAME=model file (repeatable)")->required();
  transfer_cmd->add_option("--out", transfer.out, "Matrix TSV")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Summarise attack reports into result rows");
  eval_cmd->add_option("--resources", eval.resources)->required();
  eval_cmd->add_option("--report", eval.reports, "NAME=attack report (repeatable)")->required();
  eval_cmd->add_option("--out", eval.out, "Rows TSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return RunTrain(train);
    if (*graph_cmd) return RunBuildGraph(graph);
    if (*attack_cmd) return RunAttack(attack);
    if (*defend_cmd) return defend.mode == "agbr" ? RunAgbr(defend) : RunAt(defend);
    if (*transfer_cmd) return RunTransfer(transfer);
    if (*eval_cmd) return RunEval(eval);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
