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

#ifndef FROSTMIL_PREPROCESS_SEGMENT_H_
#define FROSTMIL_PREPROCESS_SEGMENT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "frostmil/common/image.h"
#include "frostmil/synthwsi/generator.h"

namespace frostmil::preprocess {

/// Binary tissue mask at one pyramid level.
struct TissueMask {
  int width = 0;
  int height = 0;
  int downsample = 1;  // level-0 pixels per mask cell side
  std::vector<uint8_t> cells;

  bool at(int x, int y) const {
    return cells[static_cast<size_t>(y) * width + x] != 0;
  }
  size_t CountMarked() const;
};

/// Saturation Otsu threshold, median smoothing, small-component removal.
///
/// The Otsu threshold on the 256-bin saturation histogram is clamped to
/// [sat_floor, sat_cap]: the floor keeps pure-white slides empty, the cap
/// keeps all-tissue slides (where Otsu would split the tissue mode in half)
/// fully marked.
struct SegmentOptions {
  double sat_floor = 0.02;
  double sat_cap = 0.08;
  int median_kernel = 5;
  double min_component_fraction = 0.001;
};

/// Otsu threshold (bin index) for a 256-bin histogram. A bin is foreground
/// when its index is strictly greater than the threshold. Returns 0 for
/// degenerate single-valued histograms.
int OtsuThreshold(std::span<const uint64_t> histogram);

/// HSV saturation of one pixel, scaled to [0, 255].
uint8_t Saturation(const uint8_t* rgb);

TissueMask SegmentImage(const RgbImage& image, int downsample,
                        const SegmentOptions& options = {});

/// Segments pyramid level `level`. Throws ValidationError when the level is
/// absent or not loaded.
TissueMask SegmentTissue(const synthwsi::Slide& slide, size_t level,
                         const SegmentOptions& options = {});

/// Binary median filter with a square window; edges replicate.
std::vector<uint8_t> MedianFilter(std::span<const uint8_t> mask, int width,
                                  int height, int kernel);

/// Removes 8-connected components smaller than `min_cells`.
void RemoveSmallComponents(std::vector<uint8_t>& mask, int width, int height,
                           size_t min_cells);

}  // namespace frostmil::preprocess

#endif  // FROSTMIL_PREPROCESS_SEGMENT_H_
