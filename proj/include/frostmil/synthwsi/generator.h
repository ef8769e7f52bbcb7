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

#ifndef FROSTMIL_SYNTHWSI_GENERATOR_H_
#define FROSTMIL_SYNTHWSI_GENERATOR_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "frostmil/common/image.h"
#include "frostmil/synthwsi/manifest.h"

namespace frostmil::synthwsi {

enum class TissueLayout {
  kBlobs,  // one large region plus an optional small fragment
  kFull,   // a single tissue box covering the whole slide
  kBlank,  // white background only
};

struct SlideSpec {
  std::string slide_id = "slide";
  std::string case_id = "case";
  std::string center_id = "center_a";
  std::string site = "breast";
  std::string histotech_id = "ht01";
  int class_label = 0;
  bool malignant = false;

  int64_t width_px = 2048;
  int64_t height_px = 2048;
  double mpp = 0.25;
  /// Level-0 footprint of one tiling cell; lesions are sized relative to it.
  int64_t tile_px = 512;
  int n_lesions = 1;
  double lesion_contrast = 1.0;
  std::array<double, 3> channel_gain = {1.0, 1.0, 1.0};
  TissueLayout layout = TissueLayout::kBlobs;
};

struct Slide {
  SlideManifest manifest;
  std::vector<RgbImage> levels;  // aligned with manifest.levels
};

/// Samples tissue and lesion geometry. Throws ValidationError when the slide
/// cannot hold four tiling cells per side.
SlideManifest LayoutSlide(uint64_t seed, const SlideSpec& spec);

/// Rasterizes the full pyramid from a manifest. Pure function of the
/// manifest (geometry plus render params).
std::vector<RgbImage> RenderSlide(const SlideManifest& manifest);

Slide GenerateSlide(uint64_t seed, const SlideSpec& spec);

/// Slide directory: slide.json + level_<k>.png.
void SaveSlide(const Slide& slide, const std::filesystem::path& dir);
Slide LoadSlide(const std::filesystem::path& dir);
/// Manifest plus only the requested pyramid levels (others left empty).
Slide LoadSlideLevels(const std::filesystem::path& dir,
                      const std::vector<size_t>& levels);

// Nominal stain colors before center gain.
inline constexpr std::array<double, 3> kTissueRgb = {226.0, 160.0, 200.0};
inline constexpr std::array<double, 3> kLesionRgb = {122.0, 62.0, 156.0};

}  // namespace frostmil::synthwsi

#endif  // FROSTMIL_SYNTHWSI_GENERATOR_H_
