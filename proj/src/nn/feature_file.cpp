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

#include "frostmil/nn/feature_file.h"

#include <cstring>
#include <fstream>

#include "frostmil/common/binary_io.h"
#include "frostmil/common/json_io.h"

namespace frostmil::nn {

void WriteFeatureFile(const std::filesystem::path& path, const Tensor& rows) {
  if (rows.rank() != 2) {
    throw ValidationError("feature file: expected [rows, dim], got " +
                          ShapeString(rows.shape));
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kGeneric, "cannot write " + path.string());
  out.write("FVEC", 4);
  WriteU32LE(out, static_cast<uint32_t>(rows.dim(0)));
  WriteU32LE(out, static_cast<uint32_t>(rows.dim(1)));
  WriteF32LE(out, rows.data);
}

Tensor ReadFeatureFile(const std::filesystem::path& path) {
  RequireExists(path, "feature file");
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "FVEC", 4) != 0) {
    throw ValidationError(path.string() + ": bad magic, expected FVEC");
  }
  const uint32_t n = ReadU32LE(in);
  const uint32_t dim = ReadU32LE(in);
  const auto expected = 12 + 4ULL * n * dim;
  if (std::filesystem::file_size(path) != expected) {
    throw ValidationError(path.string() + ": size does not match header");
  }
  Tensor rows({static_cast<int>(n), static_cast<int>(dim)});
  ReadF32LE(in, rows.data);
  return rows;
}

}  // namespace frostmil::nn
