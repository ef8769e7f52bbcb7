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

#ifndef FROSTMIL_NN_CHECKPOINT_H_
#define FROSTMIL_NN_CHECKPOINT_H_

#include <filesystem>

#include "frostmil/common/json_io.h"
#include "frostmil/nn/params.h"

namespace frostmil::nn {

struct Checkpoint {
  Json config;
  Params params;
};

/// <dir>/model.json (config, names, shapes, byte offsets) and <dir>/model.bin
/// (little-endian fp32, concatenated in name order).
void SaveCheckpoint(const std::filesystem::path& dir, const Json& config,
                    const Params& params);
Checkpoint LoadCheckpoint(const std::filesystem::path& dir);

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_CHECKPOINT_H_
