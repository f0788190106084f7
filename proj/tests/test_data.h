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

#ifndef CHAINATTACK_TESTS_TEST_DATA_H_
#define CHAINATTACK_TESTS_TEST_DATA_H_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "chainattack/lexicon.h"
#include "chainattack/victim.h"

namespace chainattack::testing {

inline std::filesystem::path DataDir() { return CHAINATTACK_DATA_DIR; }
inline std::filesystem::path BundleDir() { return DataDir() / "bundle"; }

inline const ResourceBundle& Bundle() {
  static const ResourceBundle* bundle = new ResourceBundle(LoadResources(BundleDir()));
  return *bundle;
}

inline const LabeledDataset& ToyTrain() {
  static const LabeledDataset* data = new LabeledDataset(LoadDataset(
      DataDir() / "toy" / "train.tsv", LoadClassNames(DataDir() / "toy" / "classes.txt")));
  return *data;
}

inline const LabeledDataset& ToyTest() {
  static const LabeledDataset* data = new LabeledDataset(LoadDataset(
      DataDir() / "toy" / "test.tsv", LoadClassNames(DataDir() / "toy" / "classes.txt")));
  return *data;
}

inline const NGramClassifier& ToyModel() {
  static const NGramClassifier* model = new NGramClassifier(Train(ToyTrain(), TrainConfig{}));
  return *model;
}

// Oracle driven by a plain function of the text.
class FunctionOracle : public VictimOracle {
 public:
  FunctionOracle(std::function<std::vector<double>(std::string_view)> fn, size_t classes = 2)
      : fn_(std::move(fn)), classes_(classes) {}

  Prediction Predict(std::string_view text) const override {
    return Prediction::FromConfidences(fn_(text));
  }
  std::vector<std::string> Classes() const override {
    std::vector<std::string> out;
    for (size_t i = 0; i < classes_; ++i) out.push_back(std::to_string(i));
    return out;
  }

 private:
  std::function<std::vector<double>(std::string_view)> fn_;
  size_t classes_;
};

inline Token Hanzi(std::string s) { return {std::move(s), TokenKind::kHanziWord}; }

}  // namespace chainattack::testing

#endif  // CHAINATTACK_TESTS_TEST_DATA_H_
