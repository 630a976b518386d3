// Copyright 2026 The polybrud Authors
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

#include "polybrud/error.h"

namespace polybrud {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kEmptyBuffer: return "EmptyBuffer";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kInsufficientMoments: return "InsufficientMoments";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kNegativeDistance: return "NegativeDistance";
    case ErrorCode::kEmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace polybrud
