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

#ifndef POLYBRUD_ERROR_H_
#define POLYBRUD_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace polybrud {

// Every failure raised by the library carries one of these codes. The C API
// maps them one-to-one onto pb_status values.
enum class ErrorCode {
  kInvalidParams = 1,
  kInvalidSpec,
  kEmptyDataset,
  kEmptyBuffer,
  kEmptyBatch,
  kUnknownId,
  kInsufficientMoments,
  kNonFiniteGradient,
  kNegativeDistance,
  kEmptyTrajectory,
  kUnsupported,
  kConfigError,
  kIoError,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace polybrud

#endif  // POLYBRUD_ERROR_H_
