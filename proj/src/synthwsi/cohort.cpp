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

#include "frostmil/synthwsi/cohort.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "frostmil/common/error.h"
#include "frostmil/common/rng.h"

namespace frostmil::synthwsi {
namespace {

std::string PaddedId(const std::string& prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04d", prefix.c_str(), index);
  return buf;
}

template <typename T>
const T& Pick(Rng& rng, const std::vector<T>& values) {
  return values[static_cast<size_t>(rng.Below(values.size()))];
}

}  // namespace

std::vector<int> Apportion(int total, const std::vector<double>& weights) {
  std::vector<int> counts(weights.size(), 0);
  std::vector<std::pair<double, size_t>> remainders;
  int assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] * total;
    // Tolerate float noise such as 0.6 * 10 = 5.999999...
    const double floored = std::floor(exact + 1e-9);
    counts[i] = static_cast<int>(floored);
    assigned += counts[i];
    remainders.push_back({exact - floored, i});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t k = 0; assigned < total && k < remainders.size(); ++k, ++assigned) {
    ++counts[remainders[k].second];
  }
  return counts;
}

CohortManifest GenerateCohort(uint64_t seed, const CohortConfig& config) {
  const size_t n_classes = config.class_mix.size();
  if (n_classes < 2) throw ValidationError("class_mix: need >= 2 classes");
  if (config.n_cases < static_cast<int>(n_classes)) {
    throw ValidationError("n_cases (" + std::to_string(config.n_cases) +
                          ") < number of classes (" +
                          std::to_string(n_classes) + ")");
  }
  double mix_sum = 0.0;
  std::vector<double> mix;
  for (const auto& e : config.class_mix) {
    if (e.proportion < 0.0) throw ValidationError("class_mix: negative share");
    mix_sum += e.proportion;
    mix.push_back(e.proportion);
  }
  if (std::abs(mix_sum - 1.0) > 1e-9) {
    throw ValidationError("class_mix: proportions must sum to 1");
  }
  double split_sum = 0.0;
  std::vector<double> split_weights;
  for (const auto& [split, share] : config.split_policy) {
    if (share < 0.0) throw ValidationError("split_policy: negative share");
    split_sum += share;
    split_weights.push_back(share);
  }
  if (config.split_policy.empty() || std::abs(split_sum - 1.0) > 1e-9) {
    throw ValidationError("split_policy: shares must sum to 1");
  }
  if (config.min_slides_per_case < 1 ||
      config.max_slides_per_case < config.min_slides_per_case) {
    throw ValidationError("slides_per_case: invalid range");
  }
  if (config.centers.empty() || config.sites.empty() ||
      config.histotechs.empty()) {
    throw ValidationError("center/site/histotech vocabularies must be non-empty");
  }
  int benign_class = -1;
  for (size_t k = 0; k < n_classes; ++k) {
    if (!config.class_mix[k].malignant) {
      benign_class = static_cast<int>(k);
      break;
    }
  }
  if (benign_class < 0) throw ValidationError("class_mix: no benign class");

  CohortManifest cohort;
  cohort.cohort_id = config.cohort_id;
  cohort.seed = seed;
  cohort.lymph_node_task = config.lymph_node_task;
  for (const auto& e : config.class_mix) {
    cohort.classes.push_back({e.name, e.malignant});
  }

  // Case labels: exact apportionment, shuffled.
  const std::vector<int> class_counts = Apportion(config.n_cases, mix);
  std::vector<int> labels;
  for (size_t k = 0; k < n_classes; ++k) {
    labels.insert(labels.end(), class_counts[k], static_cast<int>(k));
  }
  Rng label_rng = Rng::Derive(seed, {0x4C41424C});
  label_rng.Shuffle(labels);

  // Splits: interleave classes round-robin, then cut contiguous blocks, so
  // each split is close to the overall class mix.
  std::vector<std::vector<int>> by_class(n_classes);
  for (int i = 0; i < config.n_cases; ++i) by_class[labels[i]].push_back(i);
  std::vector<int> interleaved;
  for (size_t round = 0; interleaved.size() < labels.size(); ++round) {
    for (size_t k = 0; k < n_classes; ++k) {
      if (round < by_class[k].size()) interleaved.push_back(by_class[k][round]);
    }
  }
  const std::vector<int> split_sizes = Apportion(config.n_cases, split_weights);
  std::vector<Split> case_split(config.n_cases);
  {
    size_t cursor = 0;
    for (size_t s = 0; s < split_sizes.size(); ++s) {
      for (int i = 0; i < split_sizes[s]; ++i) {
        case_split[interleaved[cursor++]] = config.split_policy[s].first;
      }
    }
  }

  // Per-center channel gains.
  std::vector<std::array<double, 3>> center_gain(config.centers.size());
  {
    Rng tint_rng = Rng::Derive(seed, {0x54494E54});
    for (auto& g : center_gain) {
      for (double& c : g) {
        c = 1.0 + tint_rng.Uniform(-config.center_tint, config.center_tint);
      }
    }
  }

  Rng rng = Rng::Derive(seed, {0x43415345});
  int slide_index = 0;
  for (int i = 0; i < config.n_cases; ++i) {
    CaseRecord rec;
    rec.case_id = PaddedId("case", i + 1);
    rec.label = labels[i];
    const bool positive = config.class_mix[rec.label].malignant;
    const size_t center_idx = static_cast<size_t>(rng.Below(config.centers.size()));
    rec.center_id = config.centers[center_idx];
    rec.site = Pick(rng, config.sites);
    rec.histotech_id = Pick(rng, config.histotechs);
    rec.is_difficult = rng.Bernoulli(config.difficult_rate);
    rec.needs_ihc = rng.Bernoulli(config.needs_ihc_rate);
    if (config.lymph_node_task && positive) {
      rec.metastasis_size = rng.Bernoulli(config.micro_fraction)
                                ? MetastasisSize::kMicro
                                : MetastasisSize::kMacro;
    }
    rec.pathologist_positive =
        positive ? !rng.Bernoulli(config.pathologist_miss_rate)
                 : rng.Bernoulli(config.pathologist_false_alarm_rate);

    const int n_slides =
        config.min_slides_per_case +
        static_cast<int>(rng.Below(static_cast<uint64_t>(
            config.max_slides_per_case - config.min_slides_per_case + 1)));
    // A positive case needs one slide of its class; the rest are benign or,
    // sometimes, further malignant sections.
    const int anchor = static_cast<int>(rng.Below(n_slides));
    for (int k = 0; k < n_slides; ++k) {
      int slide_class = rec.label;
      if (positive && k != anchor && !rng.Bernoulli(0.3)) {
        slide_class = benign_class;
      }
      SlideSpec spec;
      spec.slide_id = rec.case_id + "_s" + std::to_string(k + 1);
      spec.case_id = rec.case_id;
      spec.center_id = rec.center_id;
      spec.site = rec.site;
      spec.histotech_id = rec.histotech_id;
      spec.class_label = slide_class;
      spec.malignant = config.class_mix[slide_class].malignant;
      spec.width_px = config.width_px;
      spec.height_px = config.height_px;
      spec.mpp = config.mpp;
      spec.tile_px = config.tile_px;
      spec.lesion_contrast = rec.is_difficult ? config.difficult_contrast : 1.0;
      spec.channel_gain = center_gain[center_idx];
      const uint64_t slide_seed =
          Rng::DeriveSeed(seed, {0x534C4944, static_cast<uint64_t>(slide_index++)});
      SlideManifest manifest = LayoutSlide(slide_seed, spec);
      rec.slide_ids.push_back(manifest.slide_id);
      cohort.slide_split[manifest.slide_id] = case_split[i];
      cohort.slides.push_back(std::move(manifest));
    }
    cohort.cases.emplace(rec.case_id, std::move(rec));
  }
  Validate(cohort);
  return cohort;
}

std::filesystem::path SlideDir(const std::filesystem::path& root,
                               const std::string& slide_id) {
  return root / "slides" / slide_id;
}

void RenderCohort(const CohortManifest& cohort,
                  const std::filesystem::path& root) {
  for (const auto& manifest : cohort.slides) {
    Slide slide{manifest, RenderSlide(manifest)};
    SaveSlide(slide, SlideDir(root, manifest.slide_id));
  }
}

}  // namespace frostmil::synthwsi
