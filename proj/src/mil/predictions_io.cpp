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

#include "frostmil/mil/predictions_io.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "frostmil/common/error.h"
#include "frostmil/common/json_io.h"

namespace frostmil::mil {

void WritePredictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows) {
  const size_t C = rows.empty() ? 2 : rows.front().probs.size();
  std::string text = "bag_id,label";
  for (size_t k = 0; k < C; ++k) text += ",prob_" + std::to_string(k);
  text += '\n';
  char buf[64];
  for (const auto& r : rows) {
    if (r.probs.size() != C) {
      throw ValidationError("predictions: bag " + r.bag_id + " has " +
                            std::to_string(r.probs.size()) + " probabilities, expected " +
                            std::to_string(C));
    }
    text += r.bag_id + "," + std::to_string(r.label);
    for (double p : r.probs) {
      std::snprintf(buf, sizeof(buf), ",%.9g", p);
      text += buf;
    }
    text += '\n';
  }
  WriteTextFile(path, text);
}

std::vector<PredictionRow> ReadPredictions(const std::filesystem::path& path) {
  std::istringstream in(ReadTextFile(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("bag_id,label,prob_0", 0) != 0) {
    throw ValidationError(path.string() + ": missing 'bag_id,label,prob_0,...' header");
  }
  const size_t C = static_cast<size_t>(std::count(line.begin(), line.end(), ',')) - 1;
  std::vector<PredictionRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != C + 2) throw ValidationError(where + ": expected " + std::to_string(C + 2) + " fields");
    PredictionRow r;
    r.bag_id = fields[0];
    try {
      r.label = std::stoi(fields[1]);
      for (size_t k = 0; k < C; ++k) r.probs.push_back(std::stod(fields[k + 2]));
    } catch (const std::exception&) {
      throw ValidationError(where + ": unparsable number");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace frostmil::mil
