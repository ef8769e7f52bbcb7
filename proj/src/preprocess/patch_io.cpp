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

#include <fstream>
#include <sstream>

#include "frostmil/common/json_io.h"
#include "frostmil/preprocess/tiling.h"

namespace frostmil::preprocess {

void WritePatchRecords(const std::filesystem::path& path,
                       const std::vector<PatchRecord>& records) {
  std::string text;
  for (const auto& r : records) {
    const Json j{{"slide_id", r.slide_id},     {"x", r.x},
                 {"y", r.y},                   {"patch_px", r.patch_px},
                 {"mpp", r.mpp},               {"tissue_fraction", r.tissue_fraction},
                 {"in_lesion", r.in_lesion}};
    text += j.dump();
    text += '\n';
  }
  WriteTextFile(path, text);
}

std::vector<PatchRecord> ReadPatchRecords(const std::filesystem::path& path) {
  RequireExists(path, "patch records");
  std::istringstream in(ReadTextFile(path));
  std::vector<PatchRecord> out;
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
    PatchRecord r;
    r.slide_id = GetField<std::string>(j, "slide_id", where);
    r.x = GetField<int64_t>(j, "x", where);
    r.y = GetField<int64_t>(j, "y", where);
    r.patch_px = GetField<int>(j, "patch_px", where);
    r.mpp = GetField<double>(j, "mpp", where);
    r.tissue_fraction = GetField<double>(j, "tissue_fraction", where);
    r.in_lesion = GetField<bool>(j, "in_lesion", where);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace frostmil::preprocess
