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

#include "frostmil/nn/optim.h"

#include <cmath>

namespace frostmil::nn {

void AdamW::Step(Params& params, const Params& grads) {
  ++step_;
  const float lr = static_cast<float>(config_.lr);
  const float b1 = static_cast<float>(config_.beta1);
  const float b2 = static_cast<float>(config_.beta2);
  const float eps = static_cast<float>(config_.eps);
  const float decay = static_cast<float>(config_.lr * config_.weight_decay);
  const float correction1 =
      static_cast<float>(1.0 - std::pow(config_.beta1, static_cast<double>(step_)));
  const float correction2 =
      static_cast<float>(1.0 - std::pow(config_.beta2, static_cast<double>(step_)));

  for (const auto& [name, grad] : grads) {
    auto it = params.find(name);
    if (it == params.end()) {
      throw ValidationError("optimizer: gradient for unknown parameter '" + name + "'");
    }
    Tensor& p = it->second;
    if (p.shape != grad.shape) {
      throw ValidationError("optimizer: shape mismatch for '" + name + "' " +
                            ShapeString(p.shape) + " vs " + ShapeString(grad.shape));
    }
    auto [mit, m_new] = m_.try_emplace(name, Tensor(p.shape));
    auto [vit, v_new] = v_.try_emplace(name, Tensor(p.shape));
    auto& m = mit->second.data;
    auto& v = vit->second.data;
    for (size_t i = 0; i < p.numel(); ++i) {
      const float g = grad.data[i];
      p.data[i] -= decay * p.data[i];
      m[i] = b1 * m[i] + (1.0f - b1) * g;
      v[i] = b2 * v[i] + (1.0f - b2) * g * g;
      const float m_hat = m[i] / correction1;
      const float v_hat = v[i] / correction2;
      p.data[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

void AdamW::Restore(int64_t step, Params first, Params second) {
  step_ = step;
  m_ = std::move(first);
  v_ = std::move(second);
}

}  // namespace frostmil::nn
