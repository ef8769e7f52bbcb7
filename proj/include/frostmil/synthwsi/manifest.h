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

#ifndef FROSTMIL_SYNTHWSI_MANIFEST_H_
#define FROSTMIL_SYNTHWSI_MANIFEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frostmil/common/json_io.h"

namespace frostmil::synthwsi {

/// Axis-aligned rectangle in level-0 pixels, half-open on the right/bottom.
struct Box {
  int64_t x = 0;
  int64_t y = 0;
  int64_t w = 0;
  int64_t h = 0;

  int64_t area() const { return w * h; }
  bool Contains(const Box& other) const {
    return other.x >= x && other.y >= y && other.x + other.w <= x + w &&
           other.y + other.h <= y + h;
  }
  int64_t IntersectionArea(const Box& other) const;
  bool operator==(const Box&) const = default;
};

/// Everything the renderer needs beyond geometry.
struct RenderParams {
  uint64_t seed = 0;
  double lesion_contrast = 1.0;
  std::array<double, 3> channel_gain = {1.0, 1.0, 1.0};

  bool operator==(const RenderParams&) const = default;
};

struct SlideManifest {
  std::string slide_id;
  int64_t width_px = 0;
  int64_t height_px = 0;
  double mpp = 0.25;
  std::vector<int> levels = {1, 4, 16};
  std::vector<Box> lesion_boxes;
  std::vector<Box> tissue_boxes;
  int class_label = 0;
  bool malignant = false;
  std::string center_id;
  std::string site;
  std::string histotech_id;
  std::string case_id;
  RenderParams render;

  /// Dimensions of pyramid level `level` (floor of level-0 size / downsample).
  std::pair<int64_t, int64_t> LevelSize(size_t level) const;

  bool operator==(const SlideManifest&) const = default;
};

enum class Split { kPretrain, kTrain, kVal, kTest, kProspective };
enum class MetastasisSize { kNone, kMicro, kMacro };

std::string ToString(Split split);
Split ParseSplit(const std::string& text);
std::string ToString(MetastasisSize size);
MetastasisSize ParseMetastasisSize(const std::string& text);

struct ClassInfo {
  std::string name;
  bool malignant = false;
  bool operator==(const ClassInfo&) const = default;
};

struct CaseRecord {
  std::string case_id;
  std::vector<std::string> slide_ids;  // manifest slide order
  int label = 0;
  bool is_difficult = false;
  bool needs_ihc = false;
  MetastasisSize metastasis_size = MetastasisSize::kNone;
  /// Simulated frozen-section report for the case (true = malignant).
  bool pathologist_positive = false;
  std::string center_id;
  std::string site;
  std::string histotech_id;

  bool operator==(const CaseRecord&) const = default;
};

struct CohortManifest {
  std::string cohort_id;
  uint64_t seed = 0;
  std::vector<ClassInfo> classes;
  bool lymph_node_task = false;
  std::vector<SlideManifest> slides;
  std::map<std::string, Split> slide_split;
  std::map<std::string, CaseRecord> cases;

  const SlideManifest& slide(const std::string& slide_id) const;
  const SlideManifest* FindSlide(const std::string& slide_id) const;
  Split case_split(const std::string& case_id) const;
  /// Case ids in `split`, sorted.
  std::vector<std::string> CasesIn(Split split) const;
  /// Slide ids in `split`, in manifest slide order.
  std::vector<std::string> SlidesIn(Split split) const;

  bool operator==(const CohortManifest&) const = default;
};

Json ToJson(const Box& box);
Json ToJson(const SlideManifest& slide);
Json ToJson(const CohortManifest& cohort);

/// Parsing validates; errors name the offending field.
SlideManifest SlideFromJson(const Json& doc, const std::string& where = "slide");
CohortManifest CohortFromJson(const Json& doc);

/// Throws ValidationError naming the field when an invariant fails.
void Validate(const SlideManifest& slide, const std::string& where = "slide");
void Validate(const CohortManifest& cohort);

CohortManifest LoadManifest(const std::filesystem::path& path);
void SaveManifest(const CohortManifest& cohort,
                  const std::filesystem::path& path);

}  // namespace frostmil::synthwsi

#endif  // FROSTMIL_SYNTHWSI_MANIFEST_H_
