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

#ifndef FROSTMIL_MIL_ABMIL_H_
#define FROSTMIL_MIL_ABMIL_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "frostmil/common/json_io.h"
#include "frostmil/nn/params.h"

namespace frostmil::mil {

struct AbmilConfig {
  int feature_dim = 128;  // F
  int hidden = 16;        // L
  int classes = 2;        // C

  void Validate() const;
  bool operator==(const AbmilConfig&) const = default;
};

Json ToJson(const AbmilConfig& config);
AbmilConfig AbmilConfigFromJson(const Json& j);

/// abmil.V [L, F], abmil.w [L], abmil.cls.weight [C, F], abmil.cls.bias [C];
/// each uniform(+-1/sqrt(fan_in)).
nn::Params InitAbmil(const AbmilConfig& config, uint64_t seed);

template <typename T>
struct AbmilGraph {
  nn::Var<T> logits;     // [1, C]
  nn::Var<T> attention;  // [1, n]
  nn::Var<T> pooled;     // [1, F]
};

/// a = softmax_k(w . tanh(V h_k)); pooled = sum_k a_k h_k.
template <typename T>
AbmilGraph<T> ForwardAbmil(const nn::VarMap<T>& params, nn::Var<T> features);

struct AbmilOutput {
  std::vector<float> probs;
  std::vector<float> attention;
  std::vector<float> pooled;
};

AbmilOutput RunAbmil(const nn::Params& params, const nn::Tensor& features);

void SaveAbmil(const std::filesystem::path& dir, const AbmilConfig& config,
               const nn::Params& params, const Json& extra = Json::object());
std::pair<AbmilConfig, nn::Params> LoadAbmil(const std::filesystem::path& dir);

}  // namespace frostmil::mil

#endif  // FROSTMIL_MIL_ABMIL_H_
