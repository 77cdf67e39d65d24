// Copyright 2026 The lfdq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LFDQ_ERROR_HPP_
#define LFDQ_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lfdq {

// Failure categories. Values are mirrored one-to-one by lfdq_status in lfdq.h.
enum class ErrorCode {
  kInvalidArgument = 1,
  kFileMissing = 2,
  kSchemaViolation = 3,
  kNonMonotonicTime = 4,
  kEmptyDemonstration = 5,
  kDegenerateData = 6,
  kSingularCovariance = 7,
  kSingularSystem = 8,
  kEmptySet = 9,
  kUnknownFace = 10,
  kNoFeasiblePlan = 11,
  kEmptyOutcomes = 12,
  kMissingSession = 13,
  kZeroVariance = 14,
  kLengthMismatch = 15,
  kEvaluationFailure = 16,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lfdq

#endif  // LFDQ_ERROR_HPP_
