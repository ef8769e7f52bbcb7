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

#ifndef FROSTMIL_NN_AUGMENT_H_
#define FROSTMIL_NN_AUGMENT_H_

#include "frostmil/common/rng.h"
#include "frostmil/nn/tensor.h"

namespace frostmil::nn {

/// Random square crop covering [min_scale, max_scale] of the area, resized
/// back to the input size, then horizontal flip and per-channel gain.
struct AugmentConfig {
  double min_scale = 0.4;
  double max_scale = 1.0;
  double flip_probability = 0.5;
  double gain_jitter = 0.1;
};

/// image [3, N, N] in [0, 1] -> augmented [3, N, N], clamped to [0, 1].
Tensor AugmentView(const Tensor& image, Rng& rng,
                   const AugmentConfig& config = {});

/// Bilinear resize (half-pixel centers) of a [3, h, w] crop.
Tensor ResizeBilinear(const Tensor& image, int out_h, int out_w);

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_AUGMENT_H_
