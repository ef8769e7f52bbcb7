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

#include "frostmil/synthwsi/generator.h"

#include <algorithm>
#include <cmath>

#include "frostmil/common/error.h"
#include "frostmil/common/png_io.h"
#include "frostmil/common/rng.h"

namespace frostmil::synthwsi {
namespace {

/// Lattice value noise with smoothstep interpolation, values in [-1, 1].
class ValueNoise {
 public:
  ValueNoise(uint64_t seed, int64_t width, int64_t height, int period)
      : period_(period),
        cols_(width / period + 2),
        rows_(height / period + 2),
        lattice_(static_cast<size_t>(cols_ * rows_)) {
    Rng rng(seed);
    for (auto& v : lattice_) v = static_cast<float>(rng.Uniform(-1.0, 1.0));
  }

  float operator()(int64_t x, int64_t y) const {
    const int64_t cx = x / period_;
    const int64_t cy = y / period_;
    const float fx = Smooth(static_cast<float>(x % period_) / period_);
    const float fy = Smooth(static_cast<float>(y % period_) / period_);
    const float* r0 = &lattice_[static_cast<size_t>(cy * cols_ + cx)];
    const float* r1 = r0 + cols_;
    const float top = r0[0] + (r0[1] - r0[0]) * fx;
    const float bottom = r1[0] + (r1[1] - r1[0]) * fx;
    return top + (bottom - top) * fy;
  }

 private:
  static float Smooth(float t) { return t * t * (3.0f - 2.0f * t); }

  int period_;
  int64_t cols_;
  int64_t rows_;
  std::vector<float> lattice_;
};

// Gaussian falloff width of tissue edges, in level-0 pixels.
constexpr double kEdgeSigmaFraction = 0.015;
constexpr double kLesionEdgePx = 6.0;

double DistanceToBox(const Box& b, int64_t x, int64_t y) {
  const double px = x + 0.5;
  const double py = y + 0.5;
  const double dx = std::max({b.x - px, 0.0, px - (b.x + b.w)});
  const double dy = std::max({b.y - py, 0.0, py - (b.y + b.h)});
  return std::sqrt(dx * dx + dy * dy);
}

int64_t SampleSide(Rng& rng, double lo, double hi) {
  return static_cast<int64_t>(std::floor(rng.Uniform(lo, hi)));
}

}  // namespace

SlideManifest LayoutSlide(uint64_t seed, const SlideSpec& spec) {
  if (spec.tile_px <= 0 || spec.width_px < 4 * spec.tile_px ||
      spec.height_px < 4 * spec.tile_px) {
    throw ValidationError(
        "slide geometry too small: need width and height >= 4 x tile_px (" +
        std::to_string(4 * spec.tile_px) + ")");
  }
  if (spec.malignant && spec.layout == TissueLayout::kBlank) {
    throw ValidationError("a blank slide cannot be malignant");
  }
  if (spec.malignant && spec.n_lesions < 1) {
    throw ValidationError("malignant slide needs n_lesions >= 1");
  }

  SlideManifest m;
  m.slide_id = spec.slide_id;
  m.case_id = spec.case_id;
  m.center_id = spec.center_id;
  m.site = spec.site;
  m.histotech_id = spec.histotech_id;
  m.class_label = spec.class_label;
  m.malignant = spec.malignant;
  m.width_px = spec.width_px;
  m.height_px = spec.height_px;
  m.mpp = spec.mpp;
  m.levels = {1, 4, 16};
  m.render.seed = Rng::DeriveSeed(seed, {0x52454E44});
  m.render.lesion_contrast = spec.lesion_contrast;
  m.render.channel_gain = spec.channel_gain;

  Rng rng = Rng::Derive(seed, {0x4C41594F});
  const double W = static_cast<double>(spec.width_px);
  const double H = static_cast<double>(spec.height_px);

  switch (spec.layout) {
    case TissueLayout::kBlank:
      return m;
    case TissueLayout::kFull:
      m.tissue_boxes.push_back({0, 0, spec.width_px, spec.height_px});
      break;
    case TissueLayout::kBlobs: {
      Box main;
      main.w = SampleSide(rng, 0.60 * W, 0.85 * W);
      main.h = SampleSide(rng, 0.60 * H, 0.85 * H);
      main.x = SampleSide(rng, 0.04 * W, W - main.w - 0.04 * W);
      main.y = SampleSide(rng, 0.04 * H, H - main.h - 0.04 * H);
      m.tissue_boxes.push_back(main);
      if (rng.Bernoulli(0.5)) {
        Box frag;
        frag.w = SampleSide(rng, 0.10 * W, 0.20 * W);
        frag.h = SampleSide(rng, 0.10 * H, 0.20 * H);
        frag.x = SampleSide(rng, 0.0, W - frag.w);
        frag.y = SampleSide(rng, 0.0, H - frag.h);
        m.tissue_boxes.push_back(frag);
      }
      break;
    }
  }

  if (spec.malignant) {
    const Box& host = m.tissue_boxes.front();
    const double tile = static_cast<double>(spec.tile_px);
    for (int i = 0; i < spec.n_lesions; ++i) {
      // Sides of 1.5-2 cells guarantee a grid cell with >= 50% overlap.
      Box lesion;
      lesion.w = std::min<int64_t>(SampleSide(rng, 1.5 * tile, 2.0 * tile),
                                   host.w);
      lesion.h = std::min<int64_t>(SampleSide(rng, 1.5 * tile, 2.0 * tile),
                                   host.h);
      lesion.x = host.x + SampleSide(rng, 0.0, double(host.w - lesion.w) + 1.0);
      lesion.y = host.y + SampleSide(rng, 0.0, double(host.h - lesion.h) + 1.0);
      m.lesion_boxes.push_back(lesion);
    }
  }
  Validate(m, m.slide_id);
  return m;
}

std::vector<RgbImage> RenderSlide(const SlideManifest& m) {
  Validate(m, m.slide_id);
  const int64_t W = m.width_px;
  const int64_t H = m.height_px;
  RgbImage level0(static_cast<int>(W), static_cast<int>(H), 255);

  const uint64_t seed = m.render.seed;
  const ValueNoise tissue_coarse(Rng::DeriveSeed(seed, {1}), W, H, 96);
  const ValueNoise tissue_fine(Rng::DeriveSeed(seed, {2}), W, H, 24);
  const ValueNoise lesion_fine(Rng::DeriveSeed(seed, {3}), W, H, 6);
  const ValueNoise lesion_mid(Rng::DeriveSeed(seed, {4}), W, H, 12);

  const double sigma = kEdgeSigmaFraction * static_cast<double>(std::min(W, H));
  const double cutoff = 3.0 * sigma;
  std::array<double, 3> tissue_rgb;
  std::array<double, 3> lesion_rgb;
  for (int c = 0; c < 3; ++c) {
    tissue_rgb[c] = kTissueRgb[c] * m.render.channel_gain[c];
    lesion_rgb[c] = kTissueRgb[c] +
                    m.render.lesion_contrast * (kLesionRgb[c] - kTissueRgb[c]);
    lesion_rgb[c] *= m.render.channel_gain[c];
  }

  for (const Box& region : m.tissue_boxes) {
    // Each box plus its Gaussian halo; overlapping boxes take the max density.
    const int64_t x0 = std::max<int64_t>(0, region.x - int64_t(cutoff));
    const int64_t y0 = std::max<int64_t>(0, region.y - int64_t(cutoff));
    const int64_t x1 = std::min<int64_t>(W, region.x + region.w + int64_t(cutoff));
    const int64_t y1 = std::min<int64_t>(H, region.y + region.h + int64_t(cutoff));
    for (int64_t y = y0; y < y1; ++y) {
      for (int64_t x = x0; x < x1; ++x) {
        double density = 0.0;
        for (const Box& b : m.tissue_boxes) {
          const double d = DistanceToBox(b, x, y);
          if (d == 0.0) {
            density = 1.0;
            break;
          }
          if (d < cutoff) {
            density = std::max(density, std::exp(-d * d / (2 * sigma * sigma)));
          }
        }
        if (density <= 0.0) continue;

        const double grain = 0.035 * tissue_coarse(x, y) +
                             0.02 * tissue_fine(x, y);
        double rgb[3];
        for (int c = 0; c < 3; ++c) rgb[c] = tissue_rgb[c] * (1.0 + grain);

        for (const Box& lesion : m.lesion_boxes) {
          const double d = DistanceToBox(lesion, x, y);
          // Inside (d == 0) full weight; a short ramp softens the border.
          const double weight = d == 0.0 ? 1.0
                                : d < kLesionEdgePx ? 1.0 - d / kLesionEdgePx
                                                    : 0.0;
          if (weight <= 0.0) continue;
          const double speckle = 0.06 * lesion_fine(x, y) +
                                 0.04 * lesion_mid(x, y);
          for (int c = 0; c < 3; ++c) {
            const double lesion_value = lesion_rgb[c] * (1.0 + speckle);
            rgb[c] = rgb[c] + weight * (lesion_value - rgb[c]);
          }
          break;
        }

        uint8_t* px = level0.at(static_cast<int>(x), static_cast<int>(y));
        for (int c = 0; c < 3; ++c) {
          const double v = 255.0 + density * (rgb[c] - 255.0);
          px[c] = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
      }
    }
  }

  std::vector<RgbImage> levels;
  levels.reserve(m.levels.size());
  levels.push_back(std::move(level0));
  for (size_t k = 1; k < m.levels.size(); ++k) {
    const int factor = m.levels[k] / m.levels[k - 1];
    levels.push_back(DownsampleBox(levels.back(), factor));
  }
  return levels;
}

Slide GenerateSlide(uint64_t seed, const SlideSpec& spec) {
  Slide slide;
  slide.manifest = LayoutSlide(seed, spec);
  slide.levels = RenderSlide(slide.manifest);
  return slide;
}

void SaveSlide(const Slide& slide, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteJsonFile(dir / "slide.json", ToJson(slide.manifest));
  for (size_t k = 0; k < slide.levels.size(); ++k) {
    WritePng(dir / ("level_" + std::to_string(k) + ".png"), slide.levels[k]);
  }
}

Slide LoadSlideLevels(const std::filesystem::path& dir,
                      const std::vector<size_t>& wanted) {
  RequireExists(dir / "slide.json", "slide manifest");
  Slide slide;
  slide.manifest = SlideFromJson(ReadJsonFile(dir / "slide.json"));
  slide.levels.resize(slide.manifest.levels.size());
  for (size_t k : wanted) {
    if (k >= slide.levels.size()) {
      throw ValidationError(slide.manifest.slide_id + ": level " +
                            std::to_string(k) + " not in pyramid");
    }
    const auto path = dir / ("level_" + std::to_string(k) + ".png");
    RequireExists(path, "slide level");
    slide.levels[k] = ReadPng(path);
    const auto [w, h] = slide.manifest.LevelSize(k);
    if (slide.levels[k].width != w || slide.levels[k].height != h) {
      throw ValidationError(path.string() + ": dimensions do not match manifest");
    }
  }
  return slide;
}

Slide LoadSlide(const std::filesystem::path& dir) {
  RequireExists(dir / "slide.json", "slide manifest");
  const SlideManifest m = SlideFromJson(ReadJsonFile(dir / "slide.json"));
  std::vector<size_t> all(m.levels.size());
  for (size_t k = 0; k < all.size(); ++k) all[k] = k;
  return LoadSlideLevels(dir, all);
}

}  // namespace frostmil::synthwsi
