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

#include "frostmil/preprocess/segment.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "frostmil/common/error.h"

namespace frostmil::preprocess {

size_t TissueMask::CountMarked() const {
  return static_cast<size_t>(std::count(cells.begin(), cells.end(), 1));
}

uint8_t Saturation(const uint8_t* rgb) {
  const int hi = std::max({rgb[0], rgb[1], rgb[2]});
  const int lo = std::min({rgb[0], rgb[1], rgb[2]});
  if (hi == 0) return 0;
  return static_cast<uint8_t>((255 * (hi - lo) + hi / 2) / hi);
}

int OtsuThreshold(std::span<const uint64_t> histogram) {
  uint64_t total = 0;
  double weighted_total = 0.0;
  for (size_t i = 0; i < histogram.size(); ++i) {
    total += histogram[i];
    weighted_total += static_cast<double>(i) * histogram[i];
  }
  if (total == 0) return 0;

  double best_var = -1.0;
  int best_t = 0;
  uint64_t w0 = 0;
  double sum0 = 0.0;
  for (size_t t = 0; t + 1 < histogram.size(); ++t) {
    w0 += histogram[t];
    sum0 += static_cast<double>(t) * histogram[t];
    const uint64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (weighted_total - sum0) / w1;
    const double between =
        static_cast<double>(w0) * static_cast<double>(w1) * (m0 - m1) * (m0 - m1);
    if (between > best_var) {
      best_var = between;
      best_t = static_cast<int>(t);
    }
  }
  return best_t;
}

std::vector<uint8_t> MedianFilter(std::span<const uint8_t> mask, int width,
                                  int height, int kernel) {
  const int r = kernel / 2;
  const int majority = (kernel * kernel) / 2 + 1;
  std::vector<uint8_t> out(mask.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int on = 0;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = std::clamp(y + dy, 0, height - 1);
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = std::clamp(x + dx, 0, width - 1);
          on += mask[static_cast<size_t>(yy) * width + xx];
        }
      }
      out[static_cast<size_t>(y) * width + x] = on >= majority ? 1 : 0;
    }
  }
  return out;
}

void RemoveSmallComponents(std::vector<uint8_t>& mask, int width, int height,
                           size_t min_cells) {
  std::vector<int> label(mask.size(), -1);
  std::vector<size_t> stack;
  std::vector<size_t> component;
  for (size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || label[start] >= 0) continue;
    component.clear();
    stack.push_back(start);
    label[start] = 1;
    while (!stack.empty()) {
      const size_t idx = stack.back();
      stack.pop_back();
      component.push_back(idx);
      const int x = static_cast<int>(idx % width);
      const int y = static_cast<int>(idx / width);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx;
          const int yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= width || yy >= height) continue;
          const size_t n = static_cast<size_t>(yy) * width + xx;
          if (mask[n] && label[n] < 0) {
            label[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
    if (component.size() < min_cells) {
      for (size_t idx : component) mask[idx] = 0;
    }
  }
}

TissueMask SegmentImage(const RgbImage& image, int downsample,
                        const SegmentOptions& options) {
  TissueMask mask;
  mask.width = image.width;
  mask.height = image.height;
  mask.downsample = downsample;
  const size_t n = static_cast<size_t>(image.width) * image.height;
  mask.cells.assign(n, 0);
  if (n == 0) return mask;

  std::vector<uint8_t> sat(n);
  std::array<uint64_t, 256> hist{};
  for (size_t i = 0; i < n; ++i) {
    sat[i] = Saturation(image.pixels.data() + 3 * i);
    ++hist[sat[i]];
  }
  const int floor_bin = static_cast<int>(std::lround(options.sat_floor * 255));
  const int cap_bin = static_cast<int>(std::lround(options.sat_cap * 255));
  const int threshold = std::clamp(OtsuThreshold(hist), floor_bin, cap_bin);
  for (size_t i = 0; i < n; ++i) mask.cells[i] = sat[i] > threshold ? 1 : 0;

  if (options.median_kernel > 1) {
    mask.cells =
        MedianFilter(mask.cells, mask.width, mask.height, options.median_kernel);
  }
  const auto min_cells = static_cast<size_t>(
      std::ceil(options.min_component_fraction * static_cast<double>(n)));
  RemoveSmallComponents(mask.cells, mask.width, mask.height, min_cells);
  return mask;
}

TissueMask SegmentTissue(const synthwsi::Slide& slide, size_t level,
                         const SegmentOptions& options) {
  const auto& m = slide.manifest;
  if (level >= m.levels.size() || level >= slide.levels.size() ||
      slide.levels[level].width == 0) {
    throw ValidationError(m.slide_id + ": level " + std::to_string(level) +
                          " not available");
  }
  return SegmentImage(slide.levels[level], m.levels[level], options);
}

}  // namespace frostmil::preprocess
