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

#ifndef FROSTMIL_TESTS_ABMIL_GRAD_CASE_H_
#define FROSTMIL_TESTS_ABMIL_GRAD_CASE_H_

#include "frostmil/mil/abmil.h"
#include "grad_cases.h"

namespace frostmil::testing {

/// ABMIL forward plus cross-entropy on one random small bag. All parameters
/// and the features themselves are differentiated.
inline GradCase AbmilCrossEntropyCase(uint64_t seed) {
  Rng rng = Rng::Derive(seed, {0x41424D});
  mil::AbmilConfig config;
  config.feature_dim = 2 + static_cast<int>(rng.Below(5));
  config.hidden = 1 + static_cast<int>(rng.Below(4));
  config.classes = 2 + static_cast<int>(rng.Below(2));
  const int n = 1 + static_cast<int>(rng.Below(6));
  const int label = static_cast<int>(rng.Below(config.classes));
  const auto params = nn::CastParams<double>(mil::InitAbmil(config, seed));
  std::vector<std::string> names;
  std::vector<DTensor> inputs;
  for (const auto& [name, t] : params) {
    names.push_back(name);
    inputs.push_back(t);
  }
  inputs.push_back(RandomTensor(rng, {n, config.feature_dim}));
  auto fn = [names, label](DTape&, const std::vector<DVar>& in) {
    nn::VarMap<double> vars;
    for (size_t i = 0; i < names.size(); ++i) vars.emplace(names[i], in[i]);
    const auto graph = mil::ForwardAbmil(vars, in.back());
    const int labels[1] = {label};
    return nn::CrossEntropy<double>(graph.logits, labels);
  };
  return {"abmil_cross_entropy", fn, inputs};
}

}  // namespace frostmil::testing

#endif  // FROSTMIL_TESTS_ABMIL_GRAD_CASE_H_
