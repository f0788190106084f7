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

#include "chainattack/error.h"

namespace chainattack {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kResourceMissing: return "resource-missing";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kCoverage: return "coverage";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kUnreachable: return "unreachable";
    case ErrorCode::kInvalidDataset: return "invalid-dataset";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kOracleUnavailable: return "oracle-unavailable";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kIncompatibleModel: return "incompatible-model";
    case ErrorCode::kInvalidPosition: return "invalid-position";
    case ErrorCode::kNoCandidates: return "no-candidates";
    case ErrorCode::kUndefinedDistance: return "undefined-distance";
    case ErrorCode::kInvalidEvaluation: return "invalid-evaluation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace chainattack
