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

#ifndef FROSTMIL_MIL_PREDICTIONS_IO_H_
#define FROSTMIL_MIL_PREDICTIONS_IO_H_

#include <filesystem>
#include <string>
#include <vector>

namespace frostmil::mil {

struct PredictionRow {
  std::string bag_id;
  int label = 0;
  std::vector<double> probs;
};

/// `bag_id,label,prob_0,...,prob_{C-1}`; probabilities with 9 significant
/// digits.
void WritePredictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> ReadPredictions(const std::filesystem::path& path);

}  // namespace frostmil::mil

#endif  // FROSTMIL_MIL_PREDICTIONS_IO_H_
