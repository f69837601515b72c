//
// Copyright 2026 The t2sql Authors
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
//

#ifndef T2SQL_ERROR_HPP_
#define T2SQL_ERROR_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace t2sql {

// Values are mirrored one-to-one by t2sql_status in the C header.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIo = 2,
  kConfig = 3,
  kMissingDatabase = 10,
  kMalformedRecord = 11,
  kMetadataDecode = 12,
  kNotADatabase = 13,
  kQueryTimeout = 14,
  kUnknownColumnInFilter = 20,
  kEmptyExampleSql = 21,
  kUnsatisfiableBudget = 22,
  kNonpositiveSimilarity = 23,
  kUnterminatedString = 30,
  kUnterminatedComment = 31,
  kZeroVector = 40,
  kDimensionMismatch = 41,
  kEndpointUnreachable = 50,
  kHttpStatus = 51,
  kReplayMiss = 52,
  kEmptyResponse = 53,
  kStepParseFailure = 60,
  kSkeletonParseFailure = 61,
  kCountMismatch = 70,
  kInternal = 99,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal diagnostics (dropped FKs, probe timeouts, clamped similarities).
// The default sink writes to stderr; an empty sink restores it.
using WarningSink = std::function<void(std::string_view)>;
void SetWarningSink(WarningSink sink);
void Warn(std::string_view message);

}  // namespace t2sql

#endif  // T2SQL_ERROR_HPP_
