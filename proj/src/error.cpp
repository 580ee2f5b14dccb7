// Copyright 2026 The mvglo Authors
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

#include "mvglo/error.hpp"

namespace mvglo {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kSizeMismatch: return "size mismatch";
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kMixedDimension: return "mixed dimensions";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kEmpty: return "empty input";
    case ErrorCode::kMisaligned: return "misaligned inputs";
    case ErrorCode::kZeroCenterCost: return "zero centre cost";
    case ErrorCode::kSingleClass: return "single class";
    case ErrorCode::kNonFinite: return "non-finite value";
  }
  return "unknown error";
}

}  // namespace mvglo
