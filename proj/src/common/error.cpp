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

#include "frostmil/common/error.h"

namespace frostmil {

const char* Error::kind_name() const noexcept {
  switch (kind_) {
    case ErrorKind::kMissingInput:
      return "missing_input";
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kGeneric:
      break;
  }
  return "error";
}

}  // namespace frostmil
