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

#ifndef CHAINATTACK_VICTIM_H_
#define CHAINATTACK_VICTIM_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chainattack {

struct Prediction {
  int label = 0;
  std::vector<double> confidences;

  // Label is the argmax; ties go to the lowest class id.
  static Prediction FromConfidences(std::vector<double> confidences);
};

// Black-box confidence oracle. Implementations must be deterministic for a
// fixed state and safe to call from several threads.
class VictimOracle {
 public:
  virtual ~VictimOracle() = default;
  virtual Prediction Predict(std::string_view text) const = 0;
  virtual std::vector<std::string> Classes() const = 0;
};

// Confidence of `true_label`; throws Error(kOutOfRange).
double ConfidenceTrue(const VictimOracle& oracle, std::string_view text,
                      int true_label);

// Counts Predict calls made through it.
class CountingOracle : public VictimOracle {
 public:
  explicit CountingOracle(const VictimOracle& inner) : inner_(inner) {}

  Prediction Predict(std::string_view text) const override {
    count_.fetch_add(1, std::memory_order_relaxed);
    return inner_.Predict(text);
  }
  std::vector<std::string> Classes() const override { return inner_.Classes(); }
  size_t count() const { return count_.load(); }

 private:
  const VictimOracle& inner_;
  mutable std::atomic<size_t> count_{0};
};

struct LabeledExample {
  std::string text;
  int label = 0;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

struct LabeledDataset {
  std::vector<LabeledExample> examples;
  std::vector<std::string> class_names;

  // Throws Error(kInvalidDataset) when empty or a label is out of range.
  void Validate() const;
  size_t CountLabel(int label) const;
};

// label<TAB>text per line. Class names come from `class_names` when given,
// otherwise "0".."max label".
LabeledDataset LoadDataset(const std::filesystem::path& path,
                           std::vector<std::string> class_names = {});
void SaveDataset(const LabeledDataset& dataset, const std::filesystem::path& path);
// One class name per line.
std::vector<std::string> LoadClassNames(const std::filesystem::path& path);

struct NGramConfig {
  int min_n = 1;
  int max_n = 3;
  uint32_t num_buckets = 1u << 18;
  uint64_t hash_seed = 0x5bd1e9955bd1e995ULL;

  friend bool operator==(const NGramConfig&, const NGramConfig&) = default;
};

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 0.1;
  double l2 = 1e-6;
  uint64_t seed = 1;
  NGramConfig ngram;
};

// (bucket, count) pairs sorted by bucket.
using SparseFeatures = std::vector<std::pair<uint32_t, double>>;

// Multinomial logistic regression over hashed character n-gram counts.
class NGramClassifier : public VictimOracle {
 public:
  NGramClassifier(NGramConfig ngram, std::vector<std::string> class_names);

  Prediction Predict(std::string_view text) const override;
  std::vector<std::string> Classes() const override { return class_names_; }

  SparseFeatures Features(std::string_view text) const;
  std::vector<double> Scores(const SparseFeatures& features) const;
  std::vector<double> Probabilities(const SparseFeatures& features) const;

  // Cross-entropy of one example and its gradient with respect to a single
  // weight or bias.
  double Loss(const SparseFeatures& features, int label) const;
  double WeightGradient(const SparseFeatures& features, int label, int cls,
                        uint32_t bucket) const;
  double BiasGradient(const SparseFeatures& features, int label, int cls) const;

  // One SGD step on an example.
  void Step(const SparseFeatures& features, int label, double learning_rate,
            double l2);

  double weight(int cls, uint32_t bucket) const {
    return weights_[static_cast<size_t>(cls) * ngram_.num_buckets + bucket];
  }
  double& weight(int cls, uint32_t bucket) {
    return weights_[static_cast<size_t>(cls) * ngram_.num_buckets + bucket];
  }
  double bias(int cls) const { return bias_[static_cast<size_t>(cls)]; }
  double& bias(int cls) { return bias_[static_cast<size_t>(cls)]; }

  int num_classes() const { return static_cast<int>(class_names_.size()); }
  const NGramConfig& ngram() const { return ngram_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& biases() const { return bias_; }

 private:
  NGramConfig ngram_;
  std::vector<std::string> class_names_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// Throws Error(kInvalidDataset) unless at least two classes occur.
NGramClassifier Train(const LabeledDataset& data, const TrainConfig& config);

double MeanLoss(const NGramClassifier& model, const LabeledDataset& data);

inline constexpr int kModelFormatVersion = 1;

// `metadata_json`, when nonempty, is stored verbatim under "metadata".
void SaveModel(const NGramClassifier& model, const std::filesystem::path& path,
               std::string_view metadata_json = {});
// Throws Error(kParse) or Error(kIncompatibleModel).
NGramClassifier LoadModel(const std::filesystem::path& path);

}  // namespace chainattack

#endif  // CHAINATTACK_VICTIM_H_
