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

#ifndef FROSTMIL_NN_VIT_H_
#define FROSTMIL_NN_VIT_H_

#include <cstdint>

#include "frostmil/common/json_io.h"
#include "frostmil/nn/params.h"

namespace frostmil::nn {

struct ViTConfig {
  int net_px = 224;
  int patch_embed_px = 16;
  int embed_dim = 64;
  int depth = 2;
  int heads = 4;
  int mlp_ratio = 4;

  /// Desk-scale geometry used by tests and the demo pipeline.
  static ViTConfig Toy();

  int grid() const { return net_px / patch_embed_px; }
  int tokens() const { return grid() * grid(); }
  int feature_dim() const { return 2 * embed_dim; }
  void Validate() const;

  bool operator==(const ViTConfig&) const = default;
};

/// Low-rank adapters on the query and value projections of every block.
struct LoRAConfig {
  int rank = 8;
  double alpha = 16.0;
  bool query = true;
  bool value = true;

  double scale() const { return alpha / rank; }
  bool operator==(const LoRAConfig&) const = default;
};

Json ToJson(const ViTConfig& config);
Json ToJson(const LoRAConfig& config);
ViTConfig ViTConfigFromJson(const Json& j);
LoRAConfig LoRAConfigFromJson(const Json& j);

/// Base weights: "vit.*". Linear weights U(+-1/sqrt(fan_in)), zero biases,
/// unit LayerNorm gains, N(0, 0.02) class token and position embeddings.
Params InitViT(const ViTConfig& config, uint64_t seed);

/// Adapters: "lora.blocks.<i>.{q,v}.{A,B}", A[r, D] ~ U(+-1/sqrt(D)),
/// B[D, r] = 0 so the adapted model starts equal to the base model.
Params InitLoRA(const ViTConfig& config, const LoRAConfig& lora, uint64_t seed);

/// Linear `base` on x, plus scale * B (A x) when `adapter`.A and .B are
/// bound.
template <typename T>
Var<T> AdaptedProjection(const VarMap<T>& params, const std::string& base,
                         const std::string& adapter, T scale, Var<T> x);
/// Tokens [B, 1 + T, D] after the final LayerNorm; token 0 is [CLS].
/// Adapters are applied when "lora.*" entries are present in `params`:
/// q = W x + b + (alpha / r) * B (A x), likewise for v.
template <typename T>
Var<T> ForwardViT(Tape<T>& tape, const ViTConfig& config,
                  const LoRAConfig& lora, const VarMap<T>& params,
                  Var<T> images);

/// [B, 1 + T, D] -> [B, 2D]: concat([CLS], mean of the T patch tokens).
template <typename T>
Var<T> PooledFeature(Var<T> tokens);

/// Frozen encoder used for feature extraction.
struct Encoder {
  ViTConfig vit;
  LoRAConfig lora;
  Params base;      // vit.*
  Params adapters;  // lora.* (may be empty)

  Params AllParams() const;
};

/// images [B, 3, net_px, net_px] -> [B, 2D] features.
Tensor ExtractFeatures(const Encoder& encoder, const Tensor& images);

/// Parameter accounting for the encoder (projection head excluded).
struct ModelSummary {
  size_t total = 0;
  size_t trainable = 0;
  double trainable_fraction() const {
    return total ? static_cast<double>(trainable) / total : 0.0;
  }
};
ModelSummary Summarize(const Encoder& encoder);

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_VIT_H_
