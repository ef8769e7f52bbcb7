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

#ifndef FROSTMIL_COMMON_PNG_IO_H_
#define FROSTMIL_COMMON_PNG_IO_H_

#include <filesystem>

#include "frostmil/common/image.h"

namespace frostmil {

/// 8-bit RGB PNG without timestamps or text chunks, so identical rasters
/// encode to identical bytes.
void WritePng(const std::filesystem::path& path, const RgbImage& image);

/// Reads any 8-bit PNG and converts to RGB.
RgbImage ReadPng(const std::filesystem::path& path);

}  // namespace frostmil

#endif  // FROSTMIL_COMMON_PNG_IO_H_
