// Copyright 2026 The levelset Authors. All Rights Reserved.
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
// =============================================================================

#include "levelset/error.hpp"

namespace levelset {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidHyperparameter: return "InvalidHyperparameter";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::PriorNotPositiveDefinite: return "PriorNotPositiveDefinite";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptySafeSet: return "EmptySafeSet";
    case ErrorCode::InvalidBoundsInput: return "InvalidBoundsInput";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace levelset
