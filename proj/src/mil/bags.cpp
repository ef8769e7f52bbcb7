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

#include "frostmil/mil/bags.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace frostmil::mil {

const char* ToString(BagLevel level) { return level == BagLevel::kSlide ? "slide" : "case"; }

BagLevel ParseBagLevel(const std::string& text) {
  if (text == "slide") return BagLevel::kSlide;
  if (text == "case") return BagLevel::kCase;
  throw ValidationError("task.level: expected 'slide' or 'case', got '" + text + "'");
}

void TaskSpec::Validate() const {
  if (class_names.size() < 2) throw ValidationError("task.class_names: need at least 2 classes");
  std::set<std::string> unique(class_names.begin(), class_names.end());
  if (unique.size() != class_names.size()) {
    throw ValidationError("task.class_names: names must be unique");
  }
  if (classes() == 2 && (positive_class < 0 || positive_class > 1)) {
    throw ValidationError("task.positive_class must be 0 or 1");
  }
}

std::vector<Bag> BuildBags(const TaskSpec& task, const synthwsi::CohortManifest& cohort,
                           const std::vector<preprocess::PatchRecord>& records,
                           const nn::Tensor& features, const std::vector<std::string>& ids) {
  task.Validate();
  if (features.rank() != 2 || features.dim(0) != static_cast<int>(records.size())) {
    throw ValidationError("build_bags: " + std::to_string(records.size()) +
                          " patch records but feature matrix " +
                          nn::ShapeString(features.shape));
  }
  const int F = features.dim(1);
  std::map<std::string, std::vector<size_t>> rows_by_slide;
  for (size_t i = 0; i < records.size(); ++i) rows_by_slide[records[i].slide_id].push_back(i);

  std::vector<Bag> bags;
  bags.reserve(ids.size());
  for (const std::string& id : ids) {
    Bag bag;
    bag.bag_id = id;
    std::vector<std::string> slides;
    if (task.level == BagLevel::kSlide) {
      const synthwsi::SlideManifest* slide = cohort.FindSlide(id);
      if (!slide) throw ValidationError("bag " + id + ": slide not in cohort");
      bag.label = slide->class_label;
      slides.push_back(id);
    } else {
      auto it = cohort.cases.find(id);
      if (it == cohort.cases.end()) throw ValidationError("bag " + id + ": case not in cohort");
      bag.label = it->second.label;
      slides = it->second.slide_ids;
    }
    if (bag.label < 0 || bag.label >= task.classes()) {
      throw ValidationError("bag " + id + ": label " + std::to_string(bag.label) +
                            " outside [0, " + std::to_string(task.classes()) + ")");
    }
    std::vector<size_t> rows;
    for (const auto& sid : slides) {
      auto it = rows_by_slide.find(sid);
      if (it == rows_by_slide.end()) continue;
      rows.insert(rows.end(), it->second.begin(), it->second.end());
    }
    if (rows.empty()) throw ValidationError("bag " + id + ": no feature rows");
    bag.features = nn::Tensor({static_cast<int>(rows.size()), F});
    for (size_t r = 0; r < rows.size(); ++r) {
      const auto src = features.data.begin() + static_cast<std::ptrdiff_t>(rows[r] * F);
      std::copy(src, src + F, bag.features.data.begin() + static_cast<std::ptrdiff_t>(r * F));
      bag.patches.push_back(records[rows[r]]);
    }
    for (float v : bag.features.data) {
      if (!std::isfinite(v)) throw ValidationError("bag " + id + ": non-finite feature value");
    }
    bags.push_back(std::move(bag));
  }
  return bags;
}

std::vector<std::string> BagIds(const TaskSpec& task, const synthwsi::CohortManifest& cohort,
                                synthwsi::Split split) {
  return task.level == BagLevel::kSlide ? cohort.SlidesIn(split) : cohort.CasesIn(split);
}

}  // namespace frostmil::mil
