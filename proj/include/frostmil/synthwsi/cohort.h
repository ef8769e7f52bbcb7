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

#ifndef FROSTMIL_SYNTHWSI_COHORT_H_
#define FROSTMIL_SYNTHWSI_COHORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "frostmil/synthwsi/generator.h"
#include "frostmil/synthwsi/manifest.h"

namespace frostmil::synthwsi {

struct ClassMixEntry {
  std::string name;
  double proportion = 0.0;
  bool malignant = false;
};

struct CohortConfig {
  std::string cohort_id = "synthetic";
  int n_cases = 20;
  std::vector<ClassMixEntry> class_mix = {{"benign", 0.5, false},
                                          {"malignant", 0.5, true}};
  std::vector<std::pair<Split, double>> split_policy = {
      {Split::kTrain, 0.6}, {Split::kVal, 0.2}, {Split::kTest, 0.2}};
  std::vector<std::string> centers = {"center_a", "center_b", "center_c"};
  std::vector<std::string> sites = {"breast", "lymph_node", "thyroid"};
  std::vector<std::string> histotechs = {"ht01", "ht02", "ht03", "ht04"};
  int min_slides_per_case = 1;
  int max_slides_per_case = 1;

  int64_t width_px = 2048;
  int64_t height_px = 2048;
  double mpp = 0.25;
  int64_t tile_px = 512;

  double difficult_rate = 0.1;
  double needs_ihc_rate = 0.15;
  /// Lesion contrast multiplier applied to difficult cases.
  double difficult_contrast = 0.6;
  bool lymph_node_task = false;
  double micro_fraction = 0.5;
  /// Max per-channel gain deviation per center (0.05 = +-5%).
  double center_tint = 0.05;
  double pathologist_miss_rate = 0.02;
  double pathologist_false_alarm_rate = 0.01;
};

/// Largest-remainder apportionment of `total` over `weights` (sum 1).
/// Ties in the fractional part go to the lower index.
std::vector<int> Apportion(int total, const std::vector<double>& weights);

/// Deterministic cohort layout (manifests only; see RenderCohort for pixels).
CohortManifest GenerateCohort(uint64_t seed, const CohortConfig& config);

/// Writes slides/<slide_id>/ directories under `root` for every slide.
void RenderCohort(const CohortManifest& cohort,
                  const std::filesystem::path& root);

std::filesystem::path SlideDir(const std::filesystem::path& root,
                               const std::string& slide_id);

}  // namespace frostmil::synthwsi

#endif  // FROSTMIL_SYNTHWSI_COHORT_H_
