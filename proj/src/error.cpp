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

#include "lfdq/error.hpp"

namespace lfdq {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kFileMissing: return "FileMissing";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kNonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::kEmptyDemonstration: return "EmptyDemonstration";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kUnknownFace: return "UnknownFace";
    case ErrorCode::kNoFeasiblePlan: return "NoFeasiblePlan";
    case ErrorCode::kEmptyOutcomes: return "EmptyOutcomes";
    case ErrorCode::kMissingSession: return "MissingSession";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEvaluationFailure: return "EvaluationFailure";
  }
  return "Unknown";
}

}  // namespace lfdq
