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

#ifndef DEEPOINT_COMMON_ERROR_H_
#define DEEPOINT_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace deepoint {

enum class ErrorCode {
  kInvalidArgument,
  kNonPositiveDepth,
  kInsufficientViews,
  kDegenerateGeometry,
  kCoincidentPoints,
  kInfeasibleRoom,
  kInsufficientDiversity,
  kMissingUtterance,
  kUndetectedJoint,
  kEmptyWindow,
  kSingleClassDataset,
  kNonFiniteLoss,
  kMissingDirection,
  kEmptyInput,
  kNoInstances,
  kNoEvaluableFrames,
  kMissingJoint,
  kSchemaError,
  kMissingFile,
  kIoError,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure the library reports carries one of the codes above so callers
// (and tests) can dispatch on the kind of failure rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace deepoint

#endif  // DEEPOINT_COMMON_ERROR_H_
