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

#ifndef FROSTMIL_NN_FEATURE_FILE_H_
#define FROSTMIL_NN_FEATURE_FILE_H_

#include <filesystem>

#include "frostmil/nn/tensor.h"

namespace frostmil::nn {

/// "FVEC", u32 row count, u32 dim, rows of little-endian fp32.
void WriteFeatureFile(const std::filesystem::path& path, const Tensor& rows);
/// Returns [rows, dim].
Tensor ReadFeatureFile(const std::filesystem::path& path);

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_FEATURE_FILE_H_
