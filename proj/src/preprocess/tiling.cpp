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

#include "frostmil/preprocess/tiling.h"

#include <algorithm>
#include <cmath>

#include "frostmil/common/rng.h"

namespace frostmil::preprocess {

int64_t TileStride(const synthwsi::SlideManifest& slide, int patch_px, double target_mpp) {
  if (patch_px < 1) throw ValidationError("tile: patch_px must be >= 1");
  if (target_mpp < slide.mpp) {
    throw ValidationError("upsampling not supported: target_mpp " + std::to_string(target_mpp) +
                          " < slide mpp " + std::to_string(slide.mpp));
  }
  return std::llround(patch_px * target_mpp / slide.mpp);
}

double TissueFraction(const TissueMask& mask, const synthwsi::Box& f) {
  const double ds = mask.downsample;
  // Cells whose centers (cx + 0.5) * ds lie in [f.x, f.x + f.w).
  const auto first = [ds](int64_t lo) {
    return static_cast<int64_t>(std::ceil(lo / ds - 0.5));
  };
  const int64_t x0 = std::max<int64_t>(first(f.x), 0);
  const int64_t x1 = std::min<int64_t>(first(f.x + f.w), mask.width);
  const int64_t y0 = std::max<int64_t>(first(f.y), 0);
  const int64_t y1 = std::min<int64_t>(first(f.y + f.h), mask.height);
  if (x0 >= x1 || y0 >= y1) {
    const int64_t cx = std::clamp<int64_t>(static_cast<int64_t>((f.x + f.w / 2.0) / ds), 0, mask.width - 1);
    const int64_t cy = std::clamp<int64_t>(static_cast<int64_t>((f.y + f.h / 2.0) / ds), 0, mask.height - 1);
    return mask.at(static_cast<int>(cx), static_cast<int>(cy)) ? 1.0 : 0.0;
  }
  int64_t marked = 0;
  for (int64_t y = y0; y < y1; ++y) {
    for (int64_t x = x0; x < x1; ++x) marked += mask.at(static_cast<int>(x), static_cast<int>(y));
  }
  return static_cast<double>(marked) / static_cast<double>((x1 - x0) * (y1 - y0));
}

std::vector<PatchRecord> TileSlide(const synthwsi::SlideManifest& slide, const TissueMask& mask,
                                   const TileOptions& options) {
  const int64_t stride = TileStride(slide, options.patch_px, options.target_mpp);
  std::vector<PatchRecord> out;
  for (int64_t y = 0; y + stride <= slide.height_px; y += stride) {
    for (int64_t x = 0; x + stride <= slide.width_px; x += stride) {
      const synthwsi::Box footprint{x, y, stride, stride};
      const double fraction = TissueFraction(mask, footprint);
      if (fraction < options.min_tissue) continue;
      int64_t best = 0;
      for (const auto& lesion : slide.lesion_boxes) {
        best = std::max(best, lesion.IntersectionArea(footprint));
      }
      out.push_back(PatchRecord{slide.slide_id, x, y, options.patch_px, options.target_mpp,
                                fraction, 2 * best >= footprint.area()});
    }
  }
  return out;
}

namespace {

/// weights[o] lists (source index, overlap) for output cell o.
std::vector<std::vector<std::pair<int, double>>> AreaWeights(int src, int dst) {
  std::vector<std::vector<std::pair<int, double>>> weights(dst);
  const double step = static_cast<double>(src) / dst;
  for (int o = 0; o < dst; ++o) {
    const double lo = o * step;
    const double hi = (o + 1) * step;
    for (int i = static_cast<int>(lo); i < src && i < hi; ++i) {
      const double overlap = std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i));
      if (overlap > 0) weights[o].emplace_back(i, overlap / step);
    }
  }
  return weights;
}

}  // namespace

nn::Tensor ExtractPatchPixels(const RgbImage& level0, double slide_mpp, const PatchRecord& record,
                              int net_px) {
  if (net_px < 1) throw ValidationError("extract: net_px must be >= 1");
  const int64_t side = std::llround(record.patch_px * record.mpp / slide_mpp);
  if (record.x < 0 || record.y < 0 || record.x + side > level0.width ||
      record.y + side > level0.height) {
    throw ValidationError("extract: patch (" + std::to_string(record.x) + ", " +
                          std::to_string(record.y) + ") of side " + std::to_string(side) +
                          " is outside slide " + record.slide_id);
  }
  const int s = static_cast<int>(side);
  const auto weights = AreaWeights(s, net_px);
  // Horizontal pass into [s rows][net_px][3] doubles, then vertical.
  std::vector<double> rows(static_cast<size_t>(s) * net_px * 3, 0.0);
  for (int y = 0; y < s; ++y) {
    const uint8_t* src = &level0.pixels[((record.y + y) * static_cast<size_t>(level0.width) + record.x) * 3];
    for (int o = 0; o < net_px; ++o) {
      double acc[3] = {0, 0, 0};
      for (const auto& [i, w] : weights[o]) {
        for (int c = 0; c < 3; ++c) acc[c] += w * src[i * 3 + c];
      }
      for (int c = 0; c < 3; ++c) rows[(static_cast<size_t>(y) * net_px + o) * 3 + c] = acc[c];
    }
  }
  nn::Tensor out({3, net_px, net_px});
  for (int oy = 0; oy < net_px; ++oy) {
    for (int ox = 0; ox < net_px; ++ox) {
      double acc[3] = {0, 0, 0};
      for (const auto& [i, w] : weights[oy]) {
        for (int c = 0; c < 3; ++c) acc[c] += w * rows[(static_cast<size_t>(i) * net_px + ox) * 3 + c];
      }
      for (int c = 0; c < 3; ++c) {
        out.data[(static_cast<size_t>(c) * net_px + oy) * net_px + ox] =
            static_cast<float>(acc[c] / 255.0);
      }
    }
  }
  return out;
}

nn::Tensor ExtractPatchPixels(const synthwsi::Slide& slide, const PatchRecord& record,
                              int net_px) {
  return ExtractPatchPixels(slide.levels.at(0), slide.manifest.mpp, record, net_px);
}

CenterRecords BalanceCenters(const CenterRecords& records, size_t cap, uint64_t seed) {
  if (cap < 1) throw ValidationError("balance_centers: cap must be >= 1");
  CenterRecords out;
  for (const auto& [center, list] : records) {
    if (list.size() <= cap) {
      out.emplace(center, list);
      continue;
    }
    Rng rng = Rng::Derive(seed, {HashString(center)});
    std::vector<PatchRecord> kept;
    kept.reserve(cap);
    for (size_t i : rng.SampleWithoutReplacement(list.size(), cap)) kept.push_back(list[i]);
    out.emplace(center, std::move(kept));
  }
  return out;
}

size_t MedianCenterCount(const CenterRecords& records) {
  std::vector<size_t> counts;
  for (const auto& [center, list] : records) counts.push_back(list.size());
  if (counts.empty()) return 1;
  std::sort(counts.begin(), counts.end());
  return std::max<size_t>(1, counts[(counts.size() - 1) / 2]);
}

}  // namespace frostmil::preprocess
