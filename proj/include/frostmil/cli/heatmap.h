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

#ifndef FROSTMIL_CLI_HEATMAP_H_
#define FROSTMIL_CLI_HEATMAP_H_

#include <array>
#include <cstdint>

#include "frostmil/common/image.h"
#include "frostmil/mil/attention_grid.h"

namespace frostmil::cli {

/// Color for a weight in [0, 1] (clamped).
std::array<uint8_t, 3> Colormap(double weight);

/// Overlays the grid on a pyramid level with the given downsample. Weights
/// are min-max normalized again, so a constant grid renders mid-colormap.
/// Throws ValidationError if a cell falls outside the image.
RgbImage RenderHeatmap(const RgbImage& level, int downsample,
                       const mil::AttentionGrid& grid, double alpha = 0.5);

}  // namespace frostmil::cli

#endif  // FROSTMIL_CLI_HEATMAP_H_
