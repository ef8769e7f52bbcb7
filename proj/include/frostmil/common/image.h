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

#ifndef FROSTMIL_COMMON_IMAGE_H_
#define FROSTMIL_COMMON_IMAGE_H_

#include <cstdint>
#include <vector>

namespace frostmil {

/// Interleaved 8-bit RGB raster, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, uint8_t fill = 0)
      : width(w), height(h),
        pixels(static_cast<size_t>(w) * static_cast<size_t>(h) * 3, fill) {}

  uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<size_t>(y) * width + x) * 3;
  }
  const uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<size_t>(y) * width + x) * 3;
  }

  bool operator==(const RgbImage&) const = default;
};

/// Integer-factor box downsample; trailing pixels that do not fill a whole
/// block are dropped. Rounds to nearest.
RgbImage DownsampleBox(const RgbImage& src, int factor);

}  // namespace frostmil

#endif  // FROSTMIL_COMMON_IMAGE_H_
