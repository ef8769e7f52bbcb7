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

#ifndef FROSTMIL_MIL_BAGS_H_
#define FROSTMIL_MIL_BAGS_H_

#include <string>
#include <vector>

#include "frostmil/nn/tensor.h"
#include "frostmil/preprocess/tiling.h"
#include "frostmil/synthwsi/manifest.h"

namespace frostmil::mil {

struct Bag {
  std::string bag_id;
  nn::Tensor features;  // [n, F]
  int label = 0;
  std::vector<preprocess::PatchRecord> patches;  // aligned with rows

  int size() const { return features.empty() ? 0 : features.dim(0); }
};

enum class BagLevel { kSlide, kCase };

const char* ToString(BagLevel level);
BagLevel ParseBagLevel(const std::string& text);

struct TaskSpec {
  std::string task_id = "task";
  std::vector<std::string> class_names = {"benign", "malignant"};
  BagLevel level = BagLevel::kSlide;
  int positive_class = 1;  // only meaningful for C = 2

  int classes() const { return static_cast<int>(class_names.size()); }
  void Validate() const;
};

/// `features` rows align with `records`. Slide-level: one bag per slide in
/// `ids`; case-level: one bag per case in `ids`, slide rows concatenated in
/// manifest slide order. Errors name the offending bag.
std::vector<Bag> BuildBags(const TaskSpec& task,
                           const synthwsi::CohortManifest& cohort,
                           const std::vector<preprocess::PatchRecord>& records,
                           const nn::Tensor& features,
                           const std::vector<std::string>& ids);

/// Ids of the bags of `split` at the task's level, in manifest order.
std::vector<std::string> BagIds(const TaskSpec& task,
                                const synthwsi::CohortManifest& cohort,
                                synthwsi::Split split);

}  // namespace frostmil::mil

#endif  // FROSTMIL_MIL_BAGS_H_
