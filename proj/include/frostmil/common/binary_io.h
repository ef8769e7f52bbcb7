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

#ifndef FROSTMIL_COMMON_BINARY_IO_H_
#define FROSTMIL_COMMON_BINARY_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

namespace frostmil {

// Little-endian encoders, independent of host byte order.
void WriteU32LE(std::ostream& out, uint32_t value);
void WriteF32LE(std::ostream& out, std::span<const float> values);
uint32_t ReadU32LE(std::istream& in);
void ReadF32LE(std::istream& in, std::span<float> values);

}  // namespace frostmil

#endif  // FROSTMIL_COMMON_BINARY_IO_H_
