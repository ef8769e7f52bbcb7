// Copyright 2026 The frostmil Authors. All Rights Reserved.
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

#ifndef FROSTMIL_COMMON_ERROR_H_
#define FROSTMIL_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace frostmil {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  kGeneric = 1,
  kMissingInput = 2,
  kValidation = 3,
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept;

 private:
  ErrorKind kind_;
};

class MissingInputError : public Error {
 public:
  explicit MissingInputError(const std::string& message)
      : Error(ErrorKind::kMissingInput, message) {}
};

/// Invalid configuration, malformed files, violated manifest invariants,
/// undefined metrics.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::kValidation, message) {}
};

/// Non-finite values during training or evaluation.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error(ErrorKind::kNumeric, message) {}
};

}  // namespace frostmil

#endif  // FROSTMIL_COMMON_ERROR_H_
