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

#include "frostmil/common/binary_io.h"

#include <bit>
#include <cstring>

#include "frostmil/common/error.h"

namespace frostmil {

void WriteU32LE(std::ostream& out, uint32_t value) {
  const char bytes[4] = {static_cast<char>(value & 0xFF),
                         static_cast<char>((value >> 8) & 0xFF),
                         static_cast<char>((value >> 16) & 0xFF),
                         static_cast<char>((value >> 24) & 0xFF)};
  out.write(bytes, 4);
}

void WriteF32LE(std::ostream& out, std::span<const float> values) {
  for (float v : values) WriteU32LE(out, std::bit_cast<uint32_t>(v));
}

uint32_t ReadU32LE(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw ValidationError("unexpected end of binary file");
  }
  return static_cast<uint32_t>(bytes[0]) |
         (static_cast<uint32_t>(bytes[1]) << 8) |
         (static_cast<uint32_t>(bytes[2]) << 16) |
         (static_cast<uint32_t>(bytes[3]) << 24);
}

void ReadF32LE(std::istream& in, std::span<float> values) {
  for (float& v : values) v = std::bit_cast<float>(ReadU32LE(in));
}

}  // namespace frostmil
