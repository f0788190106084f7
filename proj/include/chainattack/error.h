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

#ifndef CHAINATTACK_ERROR_H_
#define CHAINATTACK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainattack {

enum class ErrorCode {
  kResourceMissing,
  kParse,
  kCoverage,
  kPrecondition,
  kNotFound,
  kUnreachable,
  kInvalidDataset,
  kOutOfRange,
  kOracleUnavailable,
  kProtocol,
  kIncompatibleModel,
  kInvalidPosition,
  kNoCandidates,
  kUndefinedDistance,
  kInvalidEvaluation,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported as Error; code() tells callers which
// contract was violated without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chainattack

#endif  // CHAINATTACK_ERROR_H_
