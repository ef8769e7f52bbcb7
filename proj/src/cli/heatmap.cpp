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

#include "frostmil/cli/heatmap.h"

#include <algorithm>
#include <cmath>

#include "frostmil/cli/viridis.h"
#include "frostmil/common/error.h"

namespace frostmil::cli {

std::array<uint8_t, 3> Colormap(double weight) {
  const double w = std::clamp(weight, 0.0, 1.0);
  const auto index = static_cast<size_t>(std::lround(w * 255.0));
  return kViridis[index];
}

RgbImage RenderHeatmap(const RgbImage& level, int downsample, const mil::AttentionGrid& grid,
                       double alpha) {
  if (downsample < 1) throw ValidationError("heatmap: downsample must be >= 1");
  std::vector<double> raw;
  raw.reserve(grid.cells.size());
  for (const auto& c : grid.cells) raw.push_back(c.weight);
  const std::vector<double> weights = mil::MinMaxNormalize(raw);

  RgbImage out = level;
  for (size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    const int64_t x0 = c.x / downsample;
    const int64_t y0 = c.y / downsample;
    const int64_t x1 = (c.x + c.size) / downsample;
    const int64_t y1 = (c.y + c.size) / downsample;
    if (c.x < 0 || c.y < 0 || c.size <= 0 || x1 > level.width || y1 > level.height) {
      throw ValidationError("heatmap: cell (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                            ") of slide " + grid.slide_id + " lies outside the slide");
    }
    const auto color = Colormap(weights[i]);
    for (int64_t y = y0; y < y1; ++y) {
      for (int64_t x = x0; x < x1; ++x) {
        uint8_t* px = &out.pixels[(static_cast<size_t>(y) * level.width + x) * 3];
        for (int ch = 0; ch < 3; ++ch) {
          px[ch] = static_cast<uint8_t>(
              std::lround((1.0 - alpha) * px[ch] + alpha * static_cast<double>(color[ch])));
        }
      }
    }
  }
  return out;
}

}  // namespace frostmil::cli
