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

#include "frostmil/nn/params.h"

#include <bit>
#include <cstring>

namespace frostmil::nn {

size_t CountParams(const Params& params, const NamePredicate& filter) {
  size_t n = 0;
  for (const auto& [name, value] : params) {
    if (!filter || filter(name)) n += value.numel();
  }
  return n;
}

uint64_t Checksum(const Params& params, const NamePredicate& filter) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [name, value] : params) {
    if (filter && !filter(name)) continue;
    mix(HashString(name));
    for (int d : value.shape) mix(static_cast<uint64_t>(d));
    for (float v : value.data) mix(std::bit_cast<uint32_t>(v));
  }
  return h;
}

void FillUniform(Tensor& tensor, Rng& rng, double bound) {
  for (float& v : tensor.data) v = static_cast<float>(rng.Uniform(-bound, bound));
}

void FillNormal(Tensor& tensor, Rng& rng, double stddev) {
  for (float& v : tensor.data) v = static_cast<float>(stddev * rng.Normal());
}

Params Subset(const Params& params, std::string_view prefix,
              std::string_view replacement) {
  Params out;
  for (const auto& [name, value] : params) {
    if (name.rfind(prefix, 0) == 0) {
      out.emplace(std::string(replacement) + name.substr(prefix.size()), value);
    }
  }
  return out;
}

void Merge(Params& into, const Params& from) {
  for (const auto& [name, value] : from) into[name] = value;
}

}  // namespace frostmil::nn
