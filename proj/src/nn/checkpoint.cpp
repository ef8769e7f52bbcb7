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

#include "frostmil/nn/checkpoint.h"

#include <fstream>

#include "frostmil/common/binary_io.h"

namespace frostmil::nn {

namespace {
constexpr const char* kFormat = "frostmil-checkpoint/1";
}

void SaveCheckpoint(const std::filesystem::path& dir, const Json& config,
                    const Params& params) {
  std::filesystem::create_directories(dir);
  Json entries = Json::array();
  uint64_t offset = 0;
  std::ofstream bin(dir / "model.bin", std::ios::binary | std::ios::trunc);
  if (!bin) throw Error(ErrorKind::kGeneric, "cannot write " + (dir / "model.bin").string());
  for (const auto& [name, value] : params) {
    entries.push_back(Json{{"name", name},
                           {"shape", value.shape},
                           {"offset", offset},
                           {"count", value.numel()}});
    WriteF32LE(bin, value.data);
    offset += 4 * value.numel();
  }
  bin.close();
  WriteJsonFile(dir / "model.json", Json{{"format", kFormat},
                                         {"dtype", "float32-le"},
                                         {"config", config},
                                         {"params", entries},
                                         {"total_bytes", offset}});
}

Checkpoint LoadCheckpoint(const std::filesystem::path& dir) {
  RequireExists(dir / "model.json", "checkpoint");
  RequireExists(dir / "model.bin", "checkpoint weights");
  const Json meta = ReadJsonFile(dir / "model.json");
  if (GetField<std::string>(meta, "format", "model.json") != kFormat) {
    throw ValidationError("model.json: unsupported checkpoint format");
  }
  Checkpoint ckpt;
  ckpt.config = meta.at("config");
  std::ifstream bin(dir / "model.bin", std::ios::binary);
  const auto file_size = std::filesystem::file_size(dir / "model.bin");
  for (const auto& entry : meta.at("params")) {
    const std::string name = GetField<std::string>(entry, "name", "model.json.params");
    const Shape shape = entry.at("shape").get<Shape>();
    const uint64_t offset = GetField<uint64_t>(entry, "offset", name);
    const uint64_t count = GetField<uint64_t>(entry, "count", name);
    if (count != NumElements(shape) || offset + 4 * count > file_size) {
      throw ValidationError("model.json: entry '" + name + "' is inconsistent");
    }
    Tensor t(shape);
    bin.seekg(static_cast<std::streamoff>(offset));
    ReadF32LE(bin, t.data);
    ckpt.params.emplace(name, std::move(t));
  }
  return ckpt;
}

}  // namespace frostmil::nn
