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

#ifndef FROSTMIL_CLI_APP_H_
#define FROSTMIL_CLI_APP_H_

#include <ostream>

namespace frostmil::cli {

/// Exit codes: 0 ok, 1 other failure, 2 missing input, 3 validation, 4 NaN
/// abort. Writes the one-line JSON summary (or error JSON) to `out`.
int RunApp(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frostmil::cli

#endif  // FROSTMIL_CLI_APP_H_
