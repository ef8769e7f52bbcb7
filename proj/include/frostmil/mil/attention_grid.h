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

#ifndef FROSTMIL_MIL_ATTENTION_GRID_H_
#define FROSTMIL_MIL_ATTENTION_GRID_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "frostmil/mil/bags.h"

namespace frostmil::mil {

struct GridCell {
  int64_t x = 0;  // level-0 footprint
  int64_t y = 0;
  int64_t size = 0;
  double weight = 0.0;  // min-max normalized
  bool in_lesion = false;

  bool operator==(const GridCell&) const = default;
};

struct AttentionGrid {
  std::string slide_id;
  std::vector<GridCell> cells;

  bool operator==(const AttentionGrid&) const = default;
};

/// Min-max to [0, 1]; constant input maps to 0.5 everywhere.
std::vector<double> MinMaxNormalize(std::span<const double> values);

/// One grid per slide in the bag, normalized per slide.
std::vector<AttentionGrid> AttentionToGrid(const Bag& bag, std::span<const float> attention,
                                           const synthwsi::CohortManifest& cohort);

/// JSON-Lines, one grid per line.
void WriteAttentionGrids(const std::filesystem::path& path,
                         const std::vector<AttentionGrid>& grids);
std::vector<AttentionGrid> ReadAttentionGrids(const std::filesystem::path& path);

}  // namespace frostmil::mil

#endif  // FROSTMIL_MIL_ATTENTION_GRID_H_
