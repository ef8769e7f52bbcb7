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

#ifndef FROSTMIL_NN_OPTIM_H_
#define FROSTMIL_NN_OPTIM_H_

#include <cstdint>

#include "frostmil/nn/params.h"

namespace frostmil::nn {

struct AdamWConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-5;
};

/// Adam with decoupled weight decay: theta -= lr * wd * theta before the
/// moment update. Only parameters that appear in `grads` are touched.
class AdamW {
 public:
  explicit AdamW(AdamWConfig config = {}) : config_(config) {}

  void Step(Params& params, const Params& grads);

  const AdamWConfig& config() const { return config_; }
  int64_t step() const { return step_; }
  const Params& first_moments() const { return m_; }
  const Params& second_moments() const { return v_; }

  /// Restores state saved from a checkpoint.
  void Restore(int64_t step, Params first, Params second);

 private:
  AdamWConfig config_;
  int64_t step_ = 0;
  Params m_;
  Params v_;
};

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_OPTIM_H_
