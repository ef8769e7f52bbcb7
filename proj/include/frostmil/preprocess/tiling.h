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

#ifndef FROSTMIL_PREPROCESS_TILING_H_
#define FROSTMIL_PREPROCESS_TILING_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "frostmil/nn/tensor.h"
#include "frostmil/preprocess/segment.h"

namespace frostmil::preprocess {

struct PatchRecord {
  std::string slide_id;
  int64_t x = 0;  // level-0 top-left
  int64_t y = 0;
  int patch_px = 512;
  double mpp = 0.25;  // extraction resolution
  double tissue_fraction = 0.0;
  bool in_lesion = false;

  bool operator==(const PatchRecord&) const = default;
};

struct TileOptions {
  int patch_px = 512;
  double target_mpp = 0.25;
  double min_tissue = 0.5;
};

/// Level-0 footprint side of one patch. Throws for target_mpp < slide mpp.
int64_t TileStride(const synthwsi::SlideManifest& slide, int patch_px,
                   double target_mpp);

/// Fraction of mask cells (by cell center) inside the level-0 box that are
/// marked. Boxes smaller than a mask cell use the cell under the box center.
double TissueFraction(const TissueMask& mask, const synthwsi::Box& footprint);

/// Full grid cells in row-major (y, x) order with tissue_fraction >= min.
std::vector<PatchRecord> TileSlide(const synthwsi::SlideManifest& slide,
                                   const TissueMask& mask,
                                   const TileOptions& options = {});

/// Area-average resize of the record's level-0 footprint: [3, net, net]
/// floats in [0, 1].
nn::Tensor ExtractPatchPixels(const RgbImage& level0, double slide_mpp,
                              const PatchRecord& record, int net_px);
nn::Tensor ExtractPatchPixels(const synthwsi::Slide& slide,
                              const PatchRecord& record, int net_px);

using CenterRecords = std::map<std::string, std::vector<PatchRecord>>;

/// Keeps min(available, cap) records per center, sampled uniformly without
/// replacement and in their original order.
CenterRecords BalanceCenters(const CenterRecords& records, size_t cap,
                             uint64_t seed);

/// Median per-center record count (lower median for even counts), >= 1.
size_t MedianCenterCount(const CenterRecords& records);

/// JSON-Lines, one record per line.
void WritePatchRecords(const std::filesystem::path& path,
                       const std::vector<PatchRecord>& records);
std::vector<PatchRecord> ReadPatchRecords(const std::filesystem::path& path);

}  // namespace frostmil::preprocess

#endif  // FROSTMIL_PREPROCESS_TILING_H_
