// Copyright 2026 The deepoint Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deepoint/common/error.h"

namespace deepoint {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kInsufficientViews: return "InsufficientViews";
    case ErrorCode::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::kCoincidentPoints: return "CoincidentPoints";
    case ErrorCode::kInfeasibleRoom: return "InfeasibleRoom";
    case ErrorCode::kInsufficientDiversity: return "InsufficientDiversity";
    case ErrorCode::kMissingUtterance: return "MissingUtterance";
    case ErrorCode::kUndetectedJoint: return "UndetectedJoint";
    case ErrorCode::kEmptyWindow: return "EmptyWindow";
    case ErrorCode::kSingleClassDataset: return "SingleClassDataset";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kMissingDirection: return "MissingDirection";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNoInstances: return "NoInstances";
    case ErrorCode::kNoEvaluableFrames: return "NoEvaluableFrames";
    case ErrorCode::kMissingJoint: return "MissingJoint";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace deepoint
