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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "frostmil/common/error.h"
#include "frostmil/common/rng.h"
#include "frostmil/preprocess/segment.h"
#include "frostmil/preprocess/tiling.h"
#include "frostmil/synthwsi/generator.h"
#include "test_util.h"

namespace frostmil::preprocess {
namespace {

using synthwsi::Box;
using synthwsi::SlideManifest;
using synthwsi::SlideSpec;

SlideSpec SmallSpec(synthwsi::TissueLayout layout, bool malignant = false) {
  SlideSpec spec;
  spec.width_px = spec.height_px = 1024;
  spec.tile_px = 256;
  spec.layout = layout;
  spec.malignant = malignant;
  spec.class_label = malignant ? 1 : 0;
  return spec;
}

SlideManifest PlainManifest(int64_t w, int64_t h, double mpp) {
  SlideManifest m;
  m.slide_id = "s";
  m.width_px = w;
  m.height_px = h;
  m.mpp = mpp;
  m.tissue_boxes = {{0, 0, w, h}};
  return m;
}

TissueMask FullMask(int w, int h, int downsample) {
  TissueMask mask;
  mask.width = w;
  mask.height = h;
  mask.downsample = downsample;
  mask.cells.assign(static_cast<size_t>(w) * h, 1);
  return mask;
}

TissueMask RandomMask(int w, int h, int downsample, uint64_t seed, double p) {
  TissueMask mask = FullMask(w, h, downsample);
  Rng rng(seed);
  for (auto& c : mask.cells) c = rng.Bernoulli(p);
  return mask;
}

// Mask cells whose centers fall in the box, counted directly.
double BruteFraction(const TissueMask& mask, const Box& b) {
  int64_t in = 0, marked = 0;
  for (int cy = 0; cy < mask.height; ++cy) {
    for (int cx = 0; cx < mask.width; ++cx) {
      const double px = (cx + 0.5) * mask.downsample;
      const double py = (cy + 0.5) * mask.downsample;
      if (px >= b.x && px < b.x + b.w && py >= b.y && py < b.y + b.h) {
        ++in;
        marked += mask.at(cx, cy);
      }
    }
  }
  return in ? double(marked) / in : -1.0;
}

TEST(SegmentTest, AllWhiteGivesEmptyMask) {
  const auto slide = synthwsi::GenerateSlide(1, SmallSpec(synthwsi::TissueLayout::kBlank));
  const TissueMask mask = SegmentTissue(slide, 2);
  EXPECT_EQ(mask.CountMarked(), 0u);
  EXPECT_TRUE(TileSlide(slide.manifest, mask).empty());
}

TEST(SegmentTest, FullTissueMarkedAlmostEverywhere) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    const auto slide = synthwsi::GenerateSlide(seed, SmallSpec(synthwsi::TissueLayout::kFull));
    for (size_t level : {1u, 2u}) {
      const TissueMask mask = SegmentTissue(slide, level);
      EXPECT_EQ(mask.width, slide.levels[level].width);
      EXPECT_EQ(mask.height, slide.levels[level].height);
      EXPECT_GE(double(mask.CountMarked()) / mask.cells.size(), 0.95);
    }
  }
}

TEST(SegmentTest, BlobsMatchGroundTruth) {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const auto slide = synthwsi::GenerateSlide(seed, SmallSpec(synthwsi::TissueLayout::kBlobs));
    const TissueMask mask = SegmentTissue(slide, 1);
    const RgbImage& img = slide.levels[1];
    int64_t box_cells = 0, box_marked = 0, white = 0, white_marked = 0;
    for (int y = 0; y < mask.height; ++y) {
      for (int x = 0; x < mask.width; ++x) {
        const double px = (x + 0.5) * mask.downsample;
        const double py = (y + 0.5) * mask.downsample;
        bool in_box = false;
        for (const Box& b : slide.manifest.tissue_boxes) {
          in_box |= px >= b.x && px < b.x + b.w && py >= b.y && py < b.y + b.h;
        }
        const uint8_t* p = img.at(x, y);
        const bool is_white = p[0] == 255 && p[1] == 255 && p[2] == 255;
        box_cells += in_box;
        box_marked += in_box && mask.at(x, y);
        white += is_white;
        white_marked += is_white && mask.at(x, y);
      }
    }
    EXPECT_GE(double(box_marked) / box_cells, 0.95) << "seed " << seed;
    ASSERT_GT(white, 0);
    EXPECT_LE(double(white_marked) / white, 0.05) << "seed " << seed;
  }
}

TEST(SegmentTest, MissingLevelRejected) {
  const auto slide = synthwsi::GenerateSlide(1, SmallSpec(synthwsi::TissueLayout::kFull));
  EXPECT_THROW(SegmentTissue(slide, 5), ValidationError);
}

TEST(SegmentTest, OtsuSplitsBimodalHistogram) {
  std::vector<uint64_t> hist(256, 0);
  hist[10] = 100;
  hist[200] = 100;
  const int t = OtsuThreshold(hist);
  EXPECT_GE(t, 10);
  EXPECT_LT(t, 200);
  std::vector<uint64_t> flat(256, 0);
  flat[40] = 5;
  EXPECT_EQ(OtsuThreshold(flat), 0);
}

TEST(SegmentTest, MedianFilterRemovesSpeck) {
  std::vector<uint8_t> mask(7 * 7, 0);
  mask[3 * 7 + 3] = 1;
  const auto out = MedianFilter(mask, 7, 7, 3);
  EXPECT_EQ(std::count(out.begin(), out.end(), 1), 0);
}

TEST(SegmentTest, SmallComponentsDropped) {
  std::vector<uint8_t> mask(10 * 10, 0);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) mask[y * 10 + x] = 1;
  }
  mask[9 * 10 + 9] = 1;
  RemoveSmallComponents(mask, 10, 10, 2);
  EXPECT_EQ(std::count(mask.begin(), mask.end(), 1), 16);
}

TEST(TileTest, FullTissueGivesFourPatches) {
  const SlideManifest m = PlainManifest(1024, 1024, 0.25);
  const auto records = TileSlide(m, FullMask(64, 64, 16));
  ASSERT_EQ(records.size(), 4u);
  const std::vector<std::pair<int64_t, int64_t>> want = {
      {0, 0}, {512, 0}, {0, 512}, {512, 512}};
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(records[i].x, want[i].first);
    EXPECT_EQ(records[i].y, want[i].second);
    EXPECT_EQ(records[i].patch_px, 512);
    EXPECT_DOUBLE_EQ(records[i].tissue_fraction, 1.0);
  }
}

TEST(TileTest, GeneratedFullSlideGivesFourPatches) {
  auto spec = SmallSpec(synthwsi::TissueLayout::kFull);
  const auto slide = synthwsi::GenerateSlide(4, spec);
  EXPECT_EQ(TileSlide(slide.manifest, SegmentTissue(slide, 2)).size(), 4u);
}

TEST(TileTest, ImpossibleThresholdGivesNothing) {
  TileOptions opts;
  opts.min_tissue = 1.01;
  EXPECT_TRUE(TileSlide(PlainManifest(1024, 1024, 0.25), FullMask(64, 64, 16), opts).empty());
}

TEST(TileTest, UpsamplingRejected) {
  TileOptions opts;
  opts.target_mpp = 0.2;
  try {
    TileSlide(PlainManifest(1024, 1024, 0.25), FullMask(64, 64, 16), opts);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("upsampling not supported"), std::string::npos);
  }
}

// Slide at 0.125 mpp tiled at 0.25: 1024 px stride, checked cell by cell.
TEST(TileTest, CoarserTargetMatchesBruteForce) {
  const SlideManifest m = PlainManifest(3300, 2200, 0.125);
  EXPECT_EQ(TileStride(m, 512, 0.25), 1024);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const TissueMask mask = RandomMask(206, 137, 16, seed, 0.3 + 0.05 * seed);
    const auto records = TileSlide(m, mask);
    std::vector<PatchRecord> expect;
    for (int64_t gy = 0; gy < 2200 / 1024; ++gy) {
      for (int64_t gx = 0; gx < 3300 / 1024; ++gx) {
        const Box cell{gx * 1024, gy * 1024, 1024, 1024};
        const double f = BruteFraction(mask, cell);
        if (f >= 0.5) expect.push_back({"s", cell.x, cell.y, 512, 0.25, f, false});
      }
    }
    ASSERT_EQ(records.size(), expect.size()) << "seed " << seed;
    for (size_t i = 0; i < records.size(); ++i) {
      EXPECT_EQ(records[i].x, expect[i].x);
      EXPECT_EQ(records[i].y, expect[i].y);
      EXPECT_NEAR(records[i].tissue_fraction, expect[i].tissue_fraction, 1e-12);
    }
  }
}

TEST(TileTest, PropertyGridAlignedNonOverlappingRowMajor) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const SlideManifest m = PlainManifest(2048 + 37 * seed, 1536, 0.25);
    const TissueMask mask = RandomMask(static_cast<int>(m.width_px / 16), 96, 16, seed, 0.6);
    TileOptions opts;
    opts.patch_px = 256;
    opts.min_tissue = 0.3;
    const auto records = TileSlide(m, mask, opts);
    for (size_t i = 0; i < records.size(); ++i) {
      EXPECT_EQ(records[i].x % 256, 0);
      EXPECT_EQ(records[i].y % 256, 0);
      EXPECT_GE(records[i].tissue_fraction, 0.3);
      if (i) {
        const auto& a = records[i - 1];
        const auto& b = records[i];
        EXPECT_TRUE(a.y < b.y || (a.y == b.y && a.x < b.x));
      }
      for (size_t j = 0; j < i; ++j) {
        const Box a{records[i].x, records[i].y, 256, 256};
        const Box b{records[j].x, records[j].y, 256, 256};
        EXPECT_EQ(a.IntersectionArea(b), 0);
      }
    }
  }
}

TEST(TileTest, PropertyMonotoneInMinTissue) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const SlideManifest m = PlainManifest(2048, 2048, 0.25);
    const TissueMask mask = RandomMask(128, 128, 16, seed, 0.5);
    std::set<std::pair<int64_t, int64_t>> previous;
    bool first = true;
    for (double t : {0.0, 0.3, 0.45, 0.5, 0.55, 0.7, 1.0}) {
      TileOptions opts;
      opts.patch_px = 128;
      opts.min_tissue = t;
      std::set<std::pair<int64_t, int64_t>> now;
      for (const auto& r : TileSlide(m, mask, opts)) now.insert({r.x, r.y});
      if (!first) {
        EXPECT_TRUE(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
      }
      previous = now;
      first = false;
    }
  }
}

TEST(TileTest, PropertyLesionRecall) {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const auto slide = synthwsi::GenerateSlide(
        seed, SmallSpec(synthwsi::TissueLayout::kBlobs, /*malignant=*/true));
    TileOptions opts;
    opts.patch_px = 256;
    const auto records = TileSlide(slide.manifest, SegmentTissue(slide, 2), opts);
    for (const Box& lesion : slide.manifest.lesion_boxes) {
      if (lesion.area() < 256 * 256) continue;
      bool hit = false;
      for (const auto& r : records) {
        const Box cell{r.x, r.y, 256, 256};
        hit |= r.in_lesion && cell.IntersectionArea(lesion) > 0;
      }
      EXPECT_TRUE(hit) << "seed " << seed;
    }
  }
}

TEST(ExtractTest, ConstantGrayStaysConstant) {
  const RgbImage img(1024, 1024, 128);
  const PatchRecord r{"s", 512, 0, 512, 0.25, 1.0, false};
  const nn::Tensor t = ExtractPatchPixels(img, 0.25, r, 224);
  ASSERT_EQ(t.shape, (nn::Shape{3, 224, 224}));
  for (float v : t.data) EXPECT_NEAR(v, 128.0 / 255.0, 1e-6);
}

TEST(ExtractTest, SameSizeIsIdentity) {
  RgbImage img(64, 64);
  Rng rng(2);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.Below(256));
  const PatchRecord r{"s", 32, 32, 32, 0.25, 1.0, false};
  const nn::Tensor t = ExtractPatchPixels(img, 0.25, r, 32);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < 32; ++y) {
      for (int x = 0; x < 32; ++x) {
        const float want = static_cast<float>(img.at(32 + x, 32 + y)[c] / 255.0);
        EXPECT_EQ(t.data[(c * 32 + y) * 32 + x], want);
      }
    }
  }
}

TEST(ExtractTest, CheckerboardAveragesToMean) {
  RgbImage img(2, 2);
  const uint8_t v[4] = {10, 200, 30, 90};
  for (int i = 0; i < 4; ++i) {
    for (int c = 0; c < 3; ++c) img.pixels[i * 3 + c] = v[i];
  }
  const PatchRecord r{"s", 0, 0, 2, 0.25, 1.0, false};
  const nn::Tensor t = ExtractPatchPixels(img, 0.25, r, 1);
  for (float x : t.data) EXPECT_NEAR(x, (10 + 200 + 30 + 90) / 4.0 / 255.0, 1e-7);
}

TEST(ExtractTest, CoarserMppReadsLargerFootprint) {
  RgbImage img(8, 8, 0);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) img.at(x, y)[0] = 255;
  }
  // 4 px at 0.25 mpp from a 0.125 mpp slide covers 8 level-0 px.
  const PatchRecord r{"s", 0, 0, 4, 0.25, 1.0, false};
  const nn::Tensor t = ExtractPatchPixels(img, 0.125, r, 2);
  EXPECT_FLOAT_EQ(t.data[0], 1.0f);
  EXPECT_FLOAT_EQ(t.data[3], 0.0f);
}

TEST(ExtractTest, OutOfBoundsRejected) {
  const RgbImage img(1024, 1024, 128);
  const PatchRecord r{"s", 768, 0, 512, 0.25, 1.0, false};
  EXPECT_THROW(ExtractPatchPixels(img, 0.25, r, 32), ValidationError);
}

std::vector<PatchRecord> Records(const std::string& prefix, int n) {
  std::vector<PatchRecord> out;
  for (int i = 0; i < n; ++i) out.push_back({prefix, i * 512, 0, 512, 0.25, 1.0, false});
  return out;
}

TEST(BalanceTest, CapsLargeCenters) {
  CenterRecords in = {{"A", Records("a", 100)}, {"B", Records("b", 10)}};
  const CenterRecords out = BalanceCenters(in, 10, 1);
  EXPECT_EQ(out.at("A").size(), 10u);
  EXPECT_EQ(out.at("B").size(), 10u);
}

TEST(BalanceTest, LargeCapIsIdentity) {
  CenterRecords in = {{"A", Records("a", 7)}, {"B", Records("b", 3)}};
  EXPECT_EQ(BalanceCenters(in, 7, 1), in);
}

TEST(BalanceTest, RepeatableAndOrderPreserving) {
  CenterRecords in = {{"A", Records("a", 100)}, {"B", Records("b", 50)}};
  const CenterRecords a = BalanceCenters(in, 30, 5);
  const CenterRecords b = BalanceCenters(in, 30, 5);
  EXPECT_EQ(a, b);
  for (const auto& [center, list] : a) {
    EXPECT_EQ(list.size(), 30u);
    for (size_t i = 1; i < list.size(); ++i) EXPECT_LT(list[i - 1].x, list[i].x);
  }
  EXPECT_NE(BalanceCenters(in, 30, 6).at("A"), a.at("A"));
}

TEST(BalanceTest, EmptyInputAndMedian) {
  EXPECT_TRUE(BalanceCenters({}, 3, 1).empty());
  EXPECT_THROW(BalanceCenters({}, 0, 1), ValidationError);
  CenterRecords in = {{"A", Records("a", 9)}, {"B", Records("b", 4)}, {"C", Records("c", 6)},
                      {"D", Records("d", 2)}};
  EXPECT_EQ(MedianCenterCount(in), 4u);
  EXPECT_EQ(MedianCenterCount({}), 1u);
}

TEST(PatchIoTest, JsonLinesRoundTrip) {
  testing::TempDir dir("patch_io");
  std::vector<PatchRecord> records = {{"s1", 0, 512, 512, 0.25, 0.75, true},
                                      {"s2", 1024, 0, 256, 0.5, 0.123456789, false}};
  WritePatchRecords(dir / "p.jsonl", records);
  EXPECT_EQ(ReadPatchRecords(dir / "p.jsonl"), records);
  const std::string text = testing::ReadBytes(dir / "p.jsonl");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

}  // namespace
}  // namespace frostmil::preprocess
