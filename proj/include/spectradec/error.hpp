// Copyright 2026 The Spectradec Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectradec {

enum class ErrorCode {
  kInvalidArgument,
  kFileNotFound,
  kUnsupportedFormat,
  kCorruptData,
  kIoError,
  kWrongChannelCount,
  kIndivisibleDimensions,
  kCallbackShapeMismatch,
  kPatchCountMismatch,
  kDimensionMismatch,
  kLengthMismatch,
  kPartitionMetadataMismatch,
  kCutoffOutOfRange,
  kImageTooSmall,
  kEmptyInput,
  kOddChannelCount,
  kShapeMismatch,
  kWeightShapeMismatch,
  kNonFiniteInput,
  kIncompatibleStack,
  kCodecError,
  kInsufficientImages,
  kInsufficientSpecs,
  kParseError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this exception type; the code
// lets callers (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spectradec
