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

#include <cmath>
#include <set>

#include "frostmil/common/error.h"
#include "frostmil/synthwsi/cohort.h"
#include "frostmil/synthwsi/generator.h"
#include "frostmil/synthwsi/manifest.h"
#include "test_util.h"

namespace frostmil::synthwsi {
namespace {

SlideSpec MalignantSpec() {
  SlideSpec spec;
  spec.class_label = 1;
  spec.malignant = true;
  spec.n_lesions = 1;
  return spec;
}

TEST(GenerateSlideTest, BenignHasNoLesions) {
  SlideSpec spec;
  const SlideManifest m = LayoutSlide(7, spec);
  EXPECT_TRUE(m.lesion_boxes.empty());
  EXPECT_EQ(m.class_label, 0);
  EXPECT_FALSE(m.tissue_boxes.empty());
}

TEST(GenerateSlideTest, SameSeedIdenticalRaster) {
  SlideSpec spec;
  spec.width_px = spec.height_px = 1024;
  spec.tile_px = 256;
  const Slide a = GenerateSlide(7, spec);
  const Slide b = GenerateSlide(7, spec);
  EXPECT_EQ(a.levels[0].pixels, b.levels[0].pixels);
  EXPECT_EQ(a.manifest, b.manifest);
}

TEST(GenerateSlideTest, DifferentSeedDifferentRaster) {
  SlideSpec spec;
  spec.width_px = spec.height_px = 1024;
  spec.tile_px = 256;
  EXPECT_NE(GenerateSlide(7, spec).levels[0].pixels,
            GenerateSlide(8, spec).levels[0].pixels);
}

TEST(GenerateSlideTest, PyramidLevels) {
  SlideSpec spec;
  spec.width_px = spec.height_px = 1024;
  spec.tile_px = 256;
  const Slide s = GenerateSlide(3, spec);
  ASSERT_EQ(s.levels.size(), 3u);
  EXPECT_EQ(s.levels[1].width, 256);
  EXPECT_EQ(s.levels[2].width, 64);
  EXPECT_EQ(s.manifest.levels, (std::vector<int>{1, 4, 16}));
}

TEST(GenerateSlideTest, BackgroundIsWhite) {
  SlideSpec spec;
  spec.width_px = spec.height_px = 1024;
  spec.tile_px = 256;
  const Slide s = GenerateSlide(5, spec);
  // Far from every tissue box the raster is pure white.
  int checked = 0;
  for (int y = 0; y < 1024; y += 16) {
    for (int x = 0; x < 1024; x += 16) {
      bool far = true;
      for (const Box& b : s.manifest.tissue_boxes) {
        const int64_t margin = 64;
        if (x >= b.x - margin && x < b.x + b.w + margin && y >= b.y - margin &&
            y < b.y + b.h + margin) {
          far = false;
        }
      }
      if (!far) continue;
      ++checked;
      const uint8_t* p = s.levels[0].at(x, y);
      EXPECT_EQ(p[0], 255);
      EXPECT_EQ(p[1], 255);
      EXPECT_EQ(p[2], 255);
    }
  }
  EXPECT_GT(checked, 0);
}

// Lesion versus surrounding tissue contrast, measured on the raster.
TEST(GenerateSlideTest, LesionTextureIsDistinct) {
  const Slide s = GenerateSlide(11, MalignantSpec());
  ASSERT_EQ(s.manifest.lesion_boxes.size(), 1u);
  const Box& lesion = s.manifest.lesion_boxes[0];
  const Box& host = s.manifest.tissue_boxes[0];
  const int64_t edge = 8;
  double sum_l[3] = {0, 0, 0}, sq_l[3] = {0, 0, 0};
  double sum_t[3] = {0, 0, 0}, sq_t[3] = {0, 0, 0};
  double n_l = 0, n_t = 0;
  for (int64_t y = host.y; y < host.y + host.h; ++y) {
    for (int64_t x = host.x; x < host.x + host.w; ++x) {
      const uint8_t* p = s.levels[0].at(static_cast<int>(x), static_cast<int>(y));
      const bool inside = x >= lesion.x + edge && x < lesion.x + lesion.w - edge &&
                          y >= lesion.y + edge && y < lesion.y + lesion.h - edge;
      const bool outside = x < lesion.x - edge || x >= lesion.x + lesion.w + edge ||
                           y < lesion.y - edge || y >= lesion.y + lesion.h + edge;
      for (int c = 0; c < 3; ++c) {
        if (inside) {
          sum_l[c] += p[c];
          sq_l[c] += double(p[c]) * p[c];
        } else if (outside) {
          sum_t[c] += p[c];
          sq_t[c] += double(p[c]) * p[c];
        }
      }
      n_l += inside;
      n_t += outside;
    }
  }
  ASSERT_GT(n_l, 1000);
  ASSERT_GT(n_t, 1000);
  for (int c = 0; c < 3; ++c) {
    const double ml = sum_l[c] / n_l;
    const double mt = sum_t[c] / n_t;
    const double sl = std::sqrt(sq_l[c] / n_l - ml * ml);
    const double st = std::sqrt(sq_t[c] / n_t - mt * mt);
    EXPECT_GT(std::abs(ml - mt), 3.0 * std::max(sl, st)) << "channel " << c;
  }
}

TEST(GenerateSlideTest, GeometryTooSmallRejected) {
  SlideSpec spec;
  spec.width_px = 1000;
  spec.tile_px = 512;
  try {
    LayoutSlide(1, spec);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("too small"), std::string::npos);
  }
}

TEST(GenerateSlideTest, MalignantBlankRejected) {
  SlideSpec spec = MalignantSpec();
  spec.layout = TissueLayout::kBlank;
  EXPECT_THROW(LayoutSlide(1, spec), ValidationError);
}

TEST(GenerateSlideTest, PropertyManifestInvariantsHold) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    SlideSpec spec = MalignantSpec();
    spec.n_lesions = 1 + static_cast<int>(seed % 3);
    const SlideManifest m = LayoutSlide(seed, spec);
    EXPECT_NO_THROW(Validate(m));
    for (const Box& l : m.lesion_boxes) {
      bool contained = false;
      for (const Box& t : m.tissue_boxes) contained |= t.Contains(l);
      EXPECT_TRUE(contained) << "seed " << seed;
    }
  }
}

// Some grid cell covers at least half of its area with lesion.
TEST(GenerateSlideTest, PropertyLesionCoverageOnDefaultGrid) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const SlideManifest m = LayoutSlide(seed, MalignantSpec());
    const int64_t stride = 512;
    bool covered = false;
    for (int64_t y = 0; y + stride <= m.height_px && !covered; y += stride) {
      for (int64_t x = 0; x + stride <= m.width_px && !covered; x += stride) {
        const Box cell{x, y, stride, stride};
        for (const Box& l : m.lesion_boxes) {
          if (2 * cell.IntersectionArea(l) >= cell.area()) covered = true;
        }
      }
    }
    EXPECT_TRUE(covered) << "seed " << seed;
  }
}

TEST(GenerateCohortTest, ExactClassMix) {
  CohortConfig config;
  config.n_cases = 10;
  const CohortManifest c = GenerateCohort(1, config);
  int positives = 0;
  for (const auto& [id, rec] : c.cases) positives += rec.label == 1;
  EXPECT_EQ(c.cases.size(), 10u);
  EXPECT_EQ(positives, 5);
}

TEST(GenerateCohortTest, SplitSizes) {
  CohortConfig config;
  config.n_cases = 10;
  const CohortManifest c = GenerateCohort(1, config);
  EXPECT_EQ(c.CasesIn(Split::kTrain).size(), 6u);
  EXPECT_EQ(c.CasesIn(Split::kVal).size(), 2u);
  EXPECT_EQ(c.CasesIn(Split::kTest).size(), 2u);
}

TEST(GenerateCohortTest, SameSeedIdenticalJsonBytes) {
  CohortConfig config;
  config.n_cases = 12;
  config.max_slides_per_case = 3;
  EXPECT_EQ(ToJson(GenerateCohort(4, config)).dump(),
            ToJson(GenerateCohort(4, config)).dump());
}

TEST(GenerateCohortTest, TooFewCasesRejected) {
  CohortConfig config;
  config.n_cases = 1;
  EXPECT_THROW(GenerateCohort(1, config), ValidationError);
}

TEST(GenerateCohortTest, MixMustSumToOne) {
  CohortConfig config;
  config.class_mix = {{"benign", 0.5, false}, {"malignant", 0.4, true}};
  EXPECT_THROW(GenerateCohort(1, config), ValidationError);
}

TEST(GenerateCohortTest, PropertyClassMixWithinOneCase) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    CohortConfig config;
    config.n_cases = 7 + static_cast<int>(seed);
    config.class_mix = {{"benign", 0.45, false},
                        {"carcinoma", 0.35, true},
                        {"sarcoma", 0.2, true}};
    const CohortManifest c = GenerateCohort(seed, config);
    std::vector<int> counts(3, 0);
    for (const auto& [id, rec] : c.cases) ++counts[rec.label];
    for (int k = 0; k < 3; ++k) {
      EXPECT_LE(std::abs(counts[k] - config.class_mix[k].proportion * config.n_cases),
                1.0);
    }
  }
}

TEST(GenerateCohortTest, PropertySplitIndependence) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    CohortConfig config;
    config.n_cases = 25;
    config.max_slides_per_case = 3;
    const CohortManifest c = GenerateCohort(seed, config);
    std::set<std::string> seen;
    size_t total = 0;
    for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
      for (const auto& id : c.CasesIn(s)) {
        EXPECT_TRUE(seen.insert(id).second) << id;
        ++total;
      }
    }
    EXPECT_EQ(total, c.cases.size());
    // Slides of a case share its split.
    for (const auto& [id, rec] : c.cases) {
      for (const auto& sid : rec.slide_ids) {
        EXPECT_EQ(c.slide_split.at(sid), c.case_split(id));
      }
    }
  }
}

TEST(GenerateCohortTest, CaseLabelMatchesSlides) {
  CohortConfig config;
  config.n_cases = 30;
  config.max_slides_per_case = 3;
  const CohortManifest c = GenerateCohort(2, config);
  for (const auto& [id, rec] : c.cases) {
    bool any_malignant = false;
    for (const auto& sid : rec.slide_ids) any_malignant |= c.slide(sid).malignant;
    EXPECT_EQ(any_malignant, c.classes[rec.label].malignant) << id;
  }
}

TEST(GenerateCohortTest, MetastasisOnlyForLymphNodePositives) {
  CohortConfig config;
  config.n_cases = 30;
  const CohortManifest plain = GenerateCohort(2, config);
  for (const auto& [id, rec] : plain.cases) {
    EXPECT_EQ(rec.metastasis_size, MetastasisSize::kNone);
  }
  config.lymph_node_task = true;
  const CohortManifest ln = GenerateCohort(2, config);
  for (const auto& [id, rec] : ln.cases) {
    EXPECT_EQ(rec.metastasis_size != MetastasisSize::kNone,
              ln.classes[rec.label].malignant);
  }
}

TEST(GenerateCohortTest, FlagRatesRoughlyHonored) {
  CohortConfig config;
  config.n_cases = 2000;
  config.difficult_rate = 0.25;
  config.needs_ihc_rate = 0.5;
  config.width_px = config.height_px = 512;
  config.tile_px = 128;
  const CohortManifest c = GenerateCohort(3, config);
  double difficult = 0, ihc = 0;
  for (const auto& [id, rec] : c.cases) {
    difficult += rec.is_difficult;
    ihc += rec.needs_ihc;
  }
  EXPECT_NEAR(difficult / 2000, 0.25, 0.04);
  EXPECT_NEAR(ihc / 2000, 0.5, 0.04);
}

TEST(ManifestTest, SaveLoadRoundTrip) {
  testing::TempDir dir("manifest");
  CohortConfig config;
  config.n_cases = 8;
  config.max_slides_per_case = 2;
  const CohortManifest c = GenerateCohort(9, config);
  SaveManifest(c, dir / "cohort.json");
  EXPECT_EQ(LoadManifest(dir / "cohort.json"), c);
}

TEST(ManifestTest, LesionOutsideTissueRejected) {
  SlideManifest m = LayoutSlide(3, MalignantSpec());
  m.lesion_boxes[0].x = 0;
  m.lesion_boxes[0].y = 0;
  m.tissue_boxes = {{1024, 1024, 1024, 1024}};
  try {
    Validate(m);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("lesion_boxes"), std::string::npos);
  }
}

TEST(ManifestTest, SlideInTwoSplitsRejected) {
  CohortConfig config;
  config.n_cases = 4;
  Json doc = ToJson(GenerateCohort(1, config));
  const std::string sid = doc["splits"]["train"][0];
  doc["splits"]["test"].push_back(sid);
  try {
    CohortFromJson(doc);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("more than one split"), std::string::npos);
  }
}

TEST(ManifestTest, MalformedJsonNamesField) {
  CohortConfig config;
  config.n_cases = 4;
  Json doc = ToJson(GenerateCohort(1, config));
  doc["slides"][0].erase("mpp");
  try {
    CohortFromJson(doc);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("mpp"), std::string::npos);
  }
}

TEST(ManifestTest, LevelsMustIncrease) {
  SlideManifest m = LayoutSlide(3, SlideSpec{});
  m.levels = {1, 4, 4};
  EXPECT_THROW(Validate(m), ValidationError);
  m.levels = {2, 4};
  EXPECT_THROW(Validate(m), ValidationError);
}

TEST(SlideIoTest, SaveLoadRoundTrip) {
  testing::TempDir dir("slide_io");
  SlideSpec spec;
  spec.width_px = spec.height_px = 512;
  spec.tile_px = 128;
  const Slide s = GenerateSlide(2, spec);
  SaveSlide(s, dir.path());
  const Slide back = LoadSlide(dir.path());
  EXPECT_EQ(back.manifest, s.manifest);
  EXPECT_EQ(back.levels, s.levels);
}

TEST(ApportionTest, LargestRemainder) {
  EXPECT_EQ(Apportion(10, {0.6, 0.2, 0.2}), (std::vector<int>{6, 2, 2}));
  EXPECT_EQ(Apportion(7, {0.5, 0.5}), (std::vector<int>{4, 3}));
}

}  // namespace
}  // namespace frostmil::synthwsi
