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

#include "chainattack/victim.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "chainattack/error.h"
#include "chainattack/rng.h"
#include "chainattack/utf8.h"
#include "json.hpp"

namespace chainattack {
namespace {

using nlohmann::json;

constexpr char kModelFormat[] = "chainattack-ngram";

uint64_t HashNGram(std::string_view bytes, int n, uint64_t seed) {
  uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  h ^= static_cast<uint64_t>(n);
  h *= 0x100000001b3ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return SplitSeed(h, 0);
}

void Softmax(std::vector<double>& scores) {
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

}  // namespace

Prediction Prediction::FromConfidences(std::vector<double> confidences) {
  Prediction p;
  p.label = 0;
  for (size_t c = 1; c < confidences.size(); ++c) {
    if (confidences[c] > confidences[static_cast<size_t>(p.label)]) {
      p.label = static_cast<int>(c);
    }
  }
  p.confidences = std::move(confidences);
  return p;
}

double ConfidenceTrue(const VictimOracle& oracle, std::string_view text,
                      int true_label) {
  const Prediction p = oracle.Predict(text);
  if (true_label < 0 || static_cast<size_t>(true_label) >= p.confidences.size()) {
    throw Error(ErrorCode::kOutOfRange,
                "true label " + std::to_string(true_label) + " outside " +
                    std::to_string(p.confidences.size()) + " classes");
  }
  return p.confidences[static_cast<size_t>(true_label)];
}

void LabeledDataset::Validate() const {
  if (examples.empty()) throw Error(ErrorCode::kInvalidDataset, "dataset is empty");
  for (const auto& ex : examples) {
    if (ex.label < 0 || static_cast<size_t>(ex.label) >= class_names.size()) {
      throw Error(ErrorCode::kInvalidDataset,
                  "label " + std::to_string(ex.label) + " outside " +
                      std::to_string(class_names.size()) + " classes");
    }
  }
}

size_t LabeledDataset::CountLabel(int label) const {
  return static_cast<size_t>(std::count_if(
      examples.begin(), examples.end(),
      [label](const LabeledExample& e) { return e.label == label; }));
}

LabeledDataset LoadDataset(const std::filesystem::path& path,
                           std::vector<std::string> class_names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open dataset " + path.string());
  LabeledDataset data;
  std::string line;
  size_t number = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  path.filename().string() + ":" + std::to_string(number) + ": missing tab");
    }
    int label = -1;
    try {
      size_t used = 0;
      label = std::stoi(line.substr(0, tab), &used);
      if (used != tab || label < 0) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse,
                  path.filename().string() + ":" + std::to_string(number) + ": bad label");
    }
    max_label = std::max(max_label, label);
    data.examples.push_back({line.substr(tab + 1), label});
  }
  if (class_names.empty()) {
    for (int c = 0; c <= max_label; ++c) class_names.push_back(std::to_string(c));
  }
  data.class_names = std::move(class_names);
  data.Validate();
  return data;
}

void SaveDataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write dataset " + path.string());
  for (const auto& ex : dataset.examples) out << ex.label << '\t' << ex.text << '\n';
}

std::vector<std::string> LoadClassNames(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open class names " + path.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  return names;
}

NGramClassifier::NGramClassifier(NGramConfig ngram, std::vector<std::string> class_names)
    : ngram_(ngram),
      class_names_(std::move(class_names)),
      weights_(class_names_.size() * ngram.num_buckets, 0.0),
      bias_(class_names_.size(), 0.0) {
  if (ngram_.min_n < 1 || ngram_.max_n < ngram_.min_n || ngram_.num_buckets == 0) {
    throw Error(ErrorCode::kPrecondition, "invalid n-gram configuration");
  }
}

SparseFeatures NGramClassifier::Features(std::string_view text) const {
  const std::vector<std::string> chars = SplitCodepoints(text);
  std::map<uint32_t, double> counts;
  for (int n = ngram_.min_n; n <= ngram_.max_n; ++n) {
    if (chars.size() < static_cast<size_t>(n)) break;
    for (size_t i = 0; i + static_cast<size_t>(n) <= chars.size(); ++i) {
      std::string gram;
      for (size_t j = i; j < i + static_cast<size_t>(n); ++j) gram += chars[j];
      const auto bucket =
          static_cast<uint32_t>(HashNGram(gram, n, ngram_.hash_seed) % ngram_.num_buckets);
      counts[bucket] += 1.0;
    }
  }
  return {counts.begin(), counts.end()};
}

std::vector<double> NGramClassifier::Scores(const SparseFeatures& features) const {
  std::vector<double> scores(bias_);
  for (int c = 0; c < num_classes(); ++c) {
    double s = 0.0;
    for (const auto& [bucket, value] : features) s += weight(c, bucket) * value;
    scores[static_cast<size_t>(c)] += s;
  }
  return scores;
}

std::vector<double> NGramClassifier::Probabilities(const SparseFeatures& features) const {
  std::vector<double> p = Scores(features);
  Softmax(p);
  return p;
}

Prediction NGramClassifier::Predict(std::string_view text) const {
  return Prediction::FromConfidences(Probabilities(Features(text)));
}

double NGramClassifier::Loss(const SparseFeatures& features, int label) const {
  std::vector<double> scores = Scores(features);
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - max);
  return -(scores[static_cast<size_t>(label)] - max - std::log(sum));
}

double NGramClassifier::WeightGradient(const SparseFeatures& features, int label,
                                       int cls, uint32_t bucket) const {
  double x = 0.0;
  for (const auto& [b, v] : features) {
    if (b == bucket) x = v;
  }
  return BiasGradient(features, label, cls) * x;
}

double NGramClassifier::BiasGradient(const SparseFeatures& features, int label,
                                     int cls) const {
  const std::vector<double> p = Probabilities(features);
  return p[static_cast<size_t>(cls)] - (cls == label ? 1.0 : 0.0);
}

void NGramClassifier::Step(const SparseFeatures& features, int label,
                           double learning_rate, double l2) {
  const std::vector<double> p = Probabilities(features);
  for (int c = 0; c < num_classes(); ++c) {
    const double g = p[static_cast<size_t>(c)] - (c == label ? 1.0 : 0.0);
    for (const auto& [bucket, value] : features) {
      double& w = weight(c, bucket);
      w -= learning_rate * (g * value + l2 * w);
    }
    bias(c) -= learning_rate * g;
  }
}

NGramClassifier Train(const LabeledDataset& data, const TrainConfig& config) {
  data.Validate();
  std::vector<bool> present(data.class_names.size(), false);
  for (const auto& ex : data.examples) present[static_cast<size_t>(ex.label)] = true;
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw Error(ErrorCode::kInvalidDataset, "training needs at least two classes");
  }
  if (config.epochs < 0 || config.learning_rate <= 0.0) {
    throw Error(ErrorCode::kPrecondition, "invalid training configuration");
  }
  NGramClassifier model(config.ngram, data.class_names);
  std::vector<SparseFeatures> features;
  features.reserve(data.examples.size());
  for (const auto& ex : data.examples) features.push_back(model.Features(ex.text));

  std::vector<size_t> order(data.examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(config.seed);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.Index(i)]);
    }
    for (size_t i : order) {
      model.Step(features[i], data.examples[i].label, config.learning_rate, config.l2);
    }
  }
  return model;
}

double MeanLoss(const NGramClassifier& model, const LabeledDataset& data) {
  double total = 0.0;
  for (const auto& ex : data.examples) total += model.Loss(model.Features(ex.text), ex.label);
  return data.examples.empty() ? 0.0 : total / static_cast<double>(data.examples.size());
}

void SaveModel(const NGramClassifier& model, const std::filesystem::path& path,
               std::string_view metadata_json) {
  json weights = json::array();
  for (int c = 0; c < model.num_classes(); ++c) {
    for (uint32_t b = 0; b < model.ngram().num_buckets; ++b) {
      const double w = model.weight(c, b);
      if (w != 0.0) weights.push_back(json::array({c, b, w}));
    }
  }
  json doc = {{"format", kModelFormat},
              {"version", kModelFormatVersion},
              {"classes", model.Classes()},
              {"ngram",
               {{"min_n", model.ngram().min_n},
                {"max_n", model.ngram().max_n},
                {"num_buckets", model.ngram().num_buckets},
                {"hash_seed", model.ngram().hash_seed}}},
              {"bias", model.biases()},
              {"weights", weights}};
  if (!metadata_json.empty()) doc["metadata"] = json::parse(metadata_json);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write model " + path.string());
  out << doc.dump() << '\n';
}

NGramClassifier LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw Error(ErrorCode::kIncompatibleModel, path.string() + ": unknown model format");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorCode::kIncompatibleModel,
                  path.string() + ": model version " + std::to_string(version) +
                      ", expected " + std::to_string(kModelFormatVersion));
    }
    NGramConfig ngram;
    const json& ng = doc.at("ngram");
    ngram.min_n = ng.at("min_n").get<int>();
    ngram.max_n = ng.at("max_n").get<int>();
    ngram.num_buckets = ng.at("num_buckets").get<uint32_t>();
    ngram.hash_seed = ng.at("hash_seed").get<uint64_t>();
    NGramClassifier model(ngram, doc.at("classes").get<std::vector<std::string>>());
    const auto bias = doc.at("bias").get<std::vector<double>>();
    if (bias.size() != static_cast<size_t>(model.num_classes())) {
      throw Error(ErrorCode::kParse, path.string() + ": bias size mismatch");
    }
    for (int c = 0; c < model.num_classes(); ++c) model.bias(c) = bias[static_cast<size_t>(c)];
    for (const json& w : doc.at("weights")) {
      const int c = w.at(0).get<int>();
      const uint32_t b = w.at(1).get<uint32_t>();
      if (c < 0 || c >= model.num_classes() || b >= ngram.num_buckets) {
        throw Error(ErrorCode::kParse, path.string() + ": weight index out of range");
      }
      model.weight(c, b) = w.at(2).get<double>();
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace chainattack
