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

#include "frostmil/mil/attention_grid.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frostmil/common/json_io.h"

namespace frostmil::mil {

std::vector<double> MinMaxNormalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0)) return out;
  for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

std::vector<AttentionGrid> AttentionToGrid(const Bag& bag, std::span<const float> attention,
                                           const synthwsi::CohortManifest& cohort) {
  if (attention.size() != bag.patches.size()) {
    throw ValidationError("attention_to_grid: bag " + bag.bag_id + " has " +
                          std::to_string(bag.patches.size()) + " patches but " +
                          std::to_string(attention.size()) + " attention weights");
  }
  std::vector<AttentionGrid> grids;
  std::vector<std::vector<size_t>> members;
  for (size_t i = 0; i < bag.patches.size(); ++i) {
    const auto& id = bag.patches[i].slide_id;
    auto it = std::find_if(grids.begin(), grids.end(),
                           [&](const AttentionGrid& g) { return g.slide_id == id; });
    if (it == grids.end()) {
      grids.push_back(AttentionGrid{id, {}});
      members.emplace_back();
      it = grids.end() - 1;
    }
    members[static_cast<size_t>(it - grids.begin())].push_back(i);
  }
  for (size_t g = 0; g < grids.size(); ++g) {
    const synthwsi::SlideManifest& slide = cohort.slide(grids[g].slide_id);
    std::vector<double> raw;
    for (size_t i : members[g]) raw.push_back(attention[i]);
    const std::vector<double> norm = MinMaxNormalize(raw);
    for (size_t k = 0; k < members[g].size(); ++k) {
      const auto& p = bag.patches[members[g][k]];
      const int64_t size = std::llround(p.patch_px * p.mpp / slide.mpp);
      grids[g].cells.push_back(GridCell{p.x, p.y, size, norm[k], p.in_lesion});
    }
  }
  return grids;
}

void WriteAttentionGrids(const std::filesystem::path& path,
                         const std::vector<AttentionGrid>& grids) {
  std::string text;
  for (const auto& g : grids) {
    Json cells = Json::array();
    for (const auto& c : g.cells) {
      cells.push_back(Json{{"x", c.x}, {"y", c.y}, {"size", c.size}, {"weight", c.weight},
                           {"in_lesion", c.in_lesion}});
    }
    text += Json{{"slide_id", g.slide_id}, {"cells", cells}}.dump();
    text += '\n';
  }
  WriteTextFile(path, text);
}

std::vector<AttentionGrid> ReadAttentionGrids(const std::filesystem::path& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<AttentionGrid> grids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ValidationError(where + ": malformed JSON: " + e.what());
    }
    AttentionGrid g;
    g.slide_id = GetField<std::string>(j, "slide_id", where);
    for (const auto& c : j.at("cells")) {
      g.cells.push_back(GridCell{GetField<int64_t>(c, "x", where), GetField<int64_t>(c, "y", where),
                                 GetField<int64_t>(c, "size", where),
                                 GetField<double>(c, "weight", where),
                                 GetField<bool>(c, "in_lesion", where)});
    }
    grids.push_back(std::move(g));
  }
  return grids;
}

}  // namespace frostmil::mil
