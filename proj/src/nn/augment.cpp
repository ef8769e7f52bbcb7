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

#include "frostmil/nn/augment.h"

#include <algorithm>
#include <cmath>

namespace frostmil::nn {

Tensor ResizeBilinear(const Tensor& image, int out_h, int out_w) {
  const int C = image.dim(0);
  const int h = image.dim(1);
  const int w = image.dim(2);
  Tensor out({C, out_h, out_w});
  for (int oy = 0; oy < out_h; ++oy) {
    const double sy = std::clamp((oy + 0.5) * h / out_h - 0.5, 0.0, h - 1.0);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, h - 1);
    const float fy = static_cast<float>(sy - y0);
    for (int ox = 0; ox < out_w; ++ox) {
      const double sx = std::clamp((ox + 0.5) * w / out_w - 0.5, 0.0, w - 1.0);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, w - 1);
      const float fx = static_cast<float>(sx - x0);
      for (int c = 0; c < C; ++c) {
        const float* plane = &image.data[static_cast<size_t>(c) * h * w];
        const float top = plane[y0 * w + x0] + fx * (plane[y0 * w + x1] - plane[y0 * w + x0]);
        const float bottom = plane[y1 * w + x0] + fx * (plane[y1 * w + x1] - plane[y1 * w + x0]);
        out.data[(static_cast<size_t>(c) * out_h + oy) * out_w + ox] = top + fy * (bottom - top);
      }
    }
  }
  return out;
}

Tensor AugmentView(const Tensor& image, Rng& rng, const AugmentConfig& config) {
  if (image.rank() != 3 || image.dim(0) != 3 || image.dim(1) != image.dim(2)) {
    throw ValidationError("augment: expected [3, N, N], got " +
                          ShapeString(image.shape));
  }
  const int n = image.dim(1);
  const double scale = rng.Uniform(config.min_scale, config.max_scale);
  const int side = std::clamp(static_cast<int>(std::lround(n * std::sqrt(scale))), 1, n);
  const int x0 = static_cast<int>(rng.Below(static_cast<uint64_t>(n - side + 1)));
  const int y0 = static_cast<int>(rng.Below(static_cast<uint64_t>(n - side + 1)));
  const bool flip = rng.Bernoulli(config.flip_probability);
  float gain[3];
  for (float& g : gain) {
    g = static_cast<float>(1.0 + rng.Uniform(-config.gain_jitter, config.gain_jitter));
  }

  Tensor crop({3, side, side});
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < side; ++y) {
      for (int x = 0; x < side; ++x) {
        const int sx = flip ? x0 + side - 1 - x : x0 + x;
        crop.data[(static_cast<size_t>(c) * side + y) * side + x] =
            image.data[(static_cast<size_t>(c) * n + y0 + y) * n + sx];
      }
    }
  }
  Tensor out = side == n ? std::move(crop) : ResizeBilinear(crop, n, n);
  for (int c = 0; c < 3; ++c) {
    float* plane = &out.data[static_cast<size_t>(c) * n * n];
    for (int i = 0; i < n * n; ++i) {
      plane[i] = std::clamp(plane[i] * gain[c], 0.0f, 1.0f);
    }
  }
  return out;
}

}  // namespace frostmil::nn
