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

#include "chainattack/remote_oracle.h"

#include <chrono>
#include <cmath>
#include <thread>

#include "chainattack/error.h"
#include "httplib.h"
#include "json.hpp"

namespace chainattack {

RemoteOracle::RemoteOracle(RemoteOracleConfig config) : config_(std::move(config)) {
  const std::string& url = config_.url;
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
    throw Error(ErrorCode::kPrecondition, "oracle url must start with http://: " + url);
  }
  const size_t slash = url.find('/', scheme + 3);
  origin_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
  if (origin_.size() <= scheme + 3) {
    throw Error(ErrorCode::kPrecondition, "oracle url has no host: " + url);
  }
  if (config_.retry.max_attempts < 1 || config_.timeout_seconds <= 0.0) {
    throw Error(ErrorCode::kPrecondition, "invalid oracle retry or timeout settings");
  }
}

Prediction RemoteOracle::Predict(std::string_view text) const {
  const std::string body = nlohmann::json{{"text", std::string(text)}}.dump();
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config_.timeout_seconds));

  std::string failure;
  for (int attempt = 0; attempt < config_.retry.max_attempts; ++attempt) {
    if (attempt > 0 && config_.retry.backoff_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(config_.retry.backoff_ms));
    }
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    queries_.fetch_add(1, std::memory_order_relaxed);
    const auto res = client.Post(path_, body, "application/json");
    if (!res) {
      failure = "request to " + config_.url + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      failure = config_.url + " returned HTTP " + std::to_string(res->status);
      continue;
    }

    std::vector<double> confidences;
    try {
      const auto doc = nlohmann::json::parse(res->body);
      confidences = doc.at("confidences").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kProtocol, "bad oracle response: " + std::string(e.what()));
    }
    if (confidences.empty()) {
      throw Error(ErrorCode::kProtocol, "oracle returned no confidences");
    }
    if (!config_.class_names.empty() &&
        confidences.size() != config_.class_names.size()) {
      throw Error(ErrorCode::kProtocol,
                  "oracle returned " + std::to_string(confidences.size()) +
                      " confidences for " + std::to_string(config_.class_names.size()) +
                      " classes");
    }
    double sum = 0.0;
    for (double c : confidences) {
      if (!(c >= 0.0 && c <= 1.0)) {
        throw Error(ErrorCode::kProtocol, "oracle confidence outside [0, 1]");
      }
      sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::kProtocol, "oracle confidences do not sum to 1");
    }
    return Prediction::FromConfidences(std::move(confidences));
  }
  throw Error(ErrorCode::kOracleUnavailable, failure);
}

}  // namespace chainattack
