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

#ifndef FROSTMIL_CLI_STAGES_H_
#define FROSTMIL_CLI_STAGES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "frostmil/cli/config.h"

namespace frostmil::cli {

namespace fs = std::filesystem;

/// Each stage writes only its declared outputs plus the effective config
/// beside them, and returns a one-line JSON summary.
Json RunGen(const RunConfig& config, const fs::path& out_dir);
Json RunTile(const RunConfig& config, const fs::path& cohort_json, const fs::path& out);
Json RunPretrain(const RunConfig& config, const fs::path& cohort_json,
                 const fs::path& patches, const fs::path& out_dir);
Json RunExtract(const RunConfig& config, const fs::path& cohort_json,
                const fs::path& patches, const fs::path& encoder_dir, const fs::path& out);
Json RunTrain(const RunConfig& config, const fs::path& cohort_json, const fs::path& patches,
              const fs::path& features, const fs::path& model_dir,
              const fs::path& predictions_dir);
/// `cohort_json` may be empty (no subgroup tags); `compare_table` may be
/// empty (no paired comparisons).
Json RunEval(const RunConfig& config, const fs::path& predictions, const fs::path& cohort_json,
             const fs::path& out_dir, const fs::path& compare_table);
Json RunTriage(const RunConfig& config, const fs::path& predictions,
               const fs::path& cohort_json, const fs::path& out);
/// Empty `slide_ids` renders every grid in the file.
Json RunHeatmap(const RunConfig& config, const fs::path& cohort_json,
                const fs::path& attention, const fs::path& out_dir,
                const std::vector<std::string>& slide_ids);

/// Pixels of `records` at net_px, loading each slide's level 0 once.
std::vector<nn::Tensor> LoadPatchPixels(const fs::path& cohort_json,
                                        const synthwsi::CohortManifest& cohort,
                                        const std::vector<preprocess::PatchRecord>& records,
                                        int net_px);

}  // namespace frostmil::cli

#endif  // FROSTMIL_CLI_STAGES_H_
