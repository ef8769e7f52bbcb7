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

#ifndef FROSTMIL_CLI_CONFIG_H_
#define FROSTMIL_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "frostmil/common/json_io.h"
#include "frostmil/mil/bags.h"
#include "frostmil/mil/train.h"
#include "frostmil/nn/dino.h"
#include "frostmil/preprocess/tiling.h"
#include "frostmil/synthwsi/cohort.h"
#include "frostmil/triage/triage.h"

namespace frostmil::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kConfigSchemaVersion = 1;

/// Relative paths resolve against `workdir`.
struct PathsConfig {
  std::string workdir = ".";
  std::string cohort = "cohort";
  std::string patches = "patches.jsonl";
  std::string features = "features.fvec";
  std::string checkpoints = "checkpoints";
  std::string predictions = "predictions";
  std::string reports = "reports";
  std::string heatmaps = "heatmaps";

  std::filesystem::path Resolve(const std::string& p) const;
};

struct PretrainStageConfig {
  nn::ViTConfig vit{224, 16, 64, 2, 4, 4};
  nn::LoRAConfig lora;
  nn::DinoConfig dino;
  int steps = 200;
  /// Patches per center after balancing; 0 uses the median center count.
  int balance_cap = 0;
};

struct TrainStageConfig {
  mil::TrainConfig optim;
  mil::BagLevel level = mil::BagLevel::kSlide;
  mil::BagLevel infer_level = mil::BagLevel::kCase;
  std::vector<std::string> predict_splits = {"test"};
};

struct EvalStageConfig {
  int bootstrap_iters = 1000;
  double level = 0.95;
  std::vector<std::string> subgroups = {"site", "center_id", "histotech_id",
                                        "is_difficult", "needs_ihc"};
};

struct TriageStageConfig {
  triage::TriagePolicy policy;
  double ihc_target_sens = 0.95;
};

struct HeatmapConfig {
  int level_index = 1;  // index into the slide's pyramid levels
  double alpha = 0.5;
};

struct RunConfig {
  uint64_t seed = 0;
  PathsConfig paths;
  synthwsi::CohortConfig gen;
  preprocess::TileOptions tile;
  PretrainStageConfig pretrain;
  TrainStageConfig train;
  EvalStageConfig eval;
  TriageStageConfig triage;
  HeatmapConfig heatmap;
};

Json ToJson(const RunConfig& config);
/// Strict parse of a complete document; unknown keys are errors.
RunConfig RunConfigFromJson(const Json& doc);

/// Recursively overlays `overlay` onto `base`. Keys absent from `base` are
/// rejected with a ValidationError naming the dotted path.
Json MergeConfig(const Json& base, const Json& overlay, const std::string& path = "");

/// Sets a dotted key (for example "pretrain.steps") to a JSON-parsed value,
/// falling back to a string when the text is not JSON.
void SetDotted(Json& doc, const std::string& dotted, const std::string& value);

/// Defaults <- optional file <- `--set` overrides.
Json LoadConfigDocument(const std::string& file, const std::vector<std::string>& sets);

/// `<output>.config.json` beside a file, or `<dir>/effective_config.json`.
void WriteEffectiveConfig(const std::filesystem::path& output, const RunConfig& config,
                          bool output_is_dir);

Json ToJson(const synthwsi::CohortConfig& config);
synthwsi::CohortConfig CohortConfigFromJson(const Json& j);

}  // namespace frostmil::cli

#endif  // FROSTMIL_CLI_CONFIG_H_
