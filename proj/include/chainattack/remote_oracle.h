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

#ifndef CHAINATTACK_REMOTE_ORACLE_H_
#define CHAINATTACK_REMOTE_ORACLE_H_

#include <atomic>
#include <string>
#include <string_view>
#include <vector>

#include "chainattack/victim.h"

namespace chainattack {

struct RetryPolicy {
  // Total attempts per prediction, including the first.
  int max_attempts = 1;
  int backoff_ms = 0;
};

struct RemoteOracleConfig {
  // http://host[:port]/path
  std::string url;
  double timeout_seconds = 10.0;
  RetryPolicy retry;
  // When set, responses must carry exactly this many confidences.
  std::vector<std::string> class_names;
};

// POSTs {"text": ...} and expects {"confidences": [...]}. Network failures and
// non-200 replies raise Error(kOracleUnavailable) once retries are spent;
// malformed bodies raise Error(kProtocol) without retrying.
class RemoteOracle : public VictimOracle {
 public:
  explicit RemoteOracle(RemoteOracleConfig config);

  Prediction Predict(std::string_view text) const override;
  std::vector<std::string> Classes() const override { return config_.class_names; }

  // HTTP requests issued so far, failed ones included.
  size_t query_count() const { return queries_.load(); }

 private:
  RemoteOracleConfig config_;
  std::string origin_;
  std::string path_;
  mutable std::atomic<size_t> queries_{0};
};

}  // namespace chainattack

#endif  // CHAINATTACK_REMOTE_ORACLE_H_
