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

#include "frostmil/common/image.h"

namespace frostmil {

RgbImage DownsampleBox(const RgbImage& src, int factor) {
  if (factor <= 1) return src;
  RgbImage out(src.width / factor, src.height / factor);
  const int area = factor * factor;
  for (int oy = 0; oy < out.height; ++oy) {
    for (int ox = 0; ox < out.width; ++ox) {
      int sum[3] = {0, 0, 0};
      for (int dy = 0; dy < factor; ++dy) {
        const uint8_t* row = src.at(ox * factor, oy * factor + dy);
        for (int dx = 0; dx < factor; ++dx) {
          sum[0] += row[dx * 3 + 0];
          sum[1] += row[dx * 3 + 1];
          sum[2] += row[dx * 3 + 2];
        }
      }
      uint8_t* dst = out.at(ox, oy);
      for (int c = 0; c < 3; ++c) {
        dst[c] = static_cast<uint8_t>((sum[c] + area / 2) / area);
      }
    }
  }
  return out;
}

}  // namespace frostmil
