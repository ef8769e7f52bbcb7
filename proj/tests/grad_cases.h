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

#ifndef FROSTMIL_TESTS_GRAD_CASES_H_
#define FROSTMIL_TESTS_GRAD_CASES_H_

#include <string>
#include <vector>

#include "frostmil/common/rng.h"
#include "frostmil/nn/dino.h"
#include "frostmil/nn/grad_check.h"
#include "frostmil/nn/ops.h"
#include "frostmil/nn/params.h"
#include "frostmil/nn/vit.h"

namespace frostmil::testing {

using DTensor = nn::BasicTensor<double>;
using DVar = nn::Var<double>;
using DTape = nn::Tape<double>;

struct GradCase {
  std::string name;
  nn::ScalarFn<double> fn;
  std::vector<DTensor> inputs;
  double eps = 1e-5;
};

inline DTensor RandomTensor(Rng& rng, nn::Shape shape, double scale = 1.0) {
  DTensor t(std::move(shape));
  for (double& v : t.data) v = scale * rng.Normal();
  return t;
}

inline int SmallDim(Rng& rng) { return 1 + static_cast<int>(rng.Below(4)); }

/// Contracts an op output with fixed random weights so every output element
/// contributes to the scalar.
inline DVar Contract(DTape& tape, DVar y, uint64_t seed) {
  Rng rng(seed);
  DVar w = tape.Leaf(RandomTensor(rng, y.shape()));
  return nn::Sum(nn::Mul(y, w));
}

/// One case per differentiable primitive, shapes drawn from `seed`.
inline std::vector<GradCase> PrimitiveGradCases(uint64_t seed) {
  Rng rng = Rng::Derive(seed, {0x47524144});
  const uint64_t ws = rng.NextU64();
  const int a = SmallDim(rng), b = SmallDim(rng), c = 1 + SmallDim(rng), d = SmallDim(rng);
  std::vector<GradCase> cases;
  auto add = [&](std::string name, std::vector<DTensor> inputs, auto body) {
    cases.push_back({std::move(name),
                     [body, ws](DTape& tape, const std::vector<DVar>& in) {
                       return Contract(tape, body(tape, in), ws);
                     },
                     std::move(inputs)});
  };
  using In = const std::vector<DVar>&;
  add("add", {RandomTensor(rng, {a, c}), RandomTensor(rng, {a, c})},
      [](DTape&, In in) { return nn::Add(in[0], in[1]); });
  add("add_broadcast", {RandomTensor(rng, {a, b, c}), RandomTensor(rng, {c})},
      [](DTape&, In in) { return nn::Add(in[0], in[1]); });
  add("sub", {RandomTensor(rng, {a, c}), RandomTensor(rng, {a, c})},
      [](DTape&, In in) { return nn::Sub(in[0], in[1]); });
  add("mul", {RandomTensor(rng, {a, c}), RandomTensor(rng, {a, c})},
      [](DTape&, In in) { return nn::Mul(in[0], in[1]); });
  add("mul_broadcast", {RandomTensor(rng, {a, b, c}), RandomTensor(rng, {b, c})},
      [](DTape&, In in) { return nn::Mul(in[0], in[1]); });
  add("scale", {RandomTensor(rng, {a, c})},
      [](DTape&, In in) { return nn::Scale(in[0], 1.7); });
  add("linear", {RandomTensor(rng, {a, b, c}), RandomTensor(rng, {d, c}), RandomTensor(rng, {d})},
      [](DTape&, In in) { return nn::Linear(in[0], in[1], in[2]); });
  add("linear_nobias", {RandomTensor(rng, {a, c}), RandomTensor(rng, {d, c})},
      [](DTape&, In in) { return nn::Linear(in[0], in[1], DVar{}); });
  add("matmul", {RandomTensor(rng, {a, b, c}), RandomTensor(rng, {a, c, d})},
      [](DTape&, In in) { return nn::BatchMatMul(in[0], in[1]); });
  add("matmul_transposed", {RandomTensor(rng, {a, b, c}), RandomTensor(rng, {a, d, c})},
      [](DTape&, In in) { return nn::BatchMatMul(in[0], in[1], true); });
  add("reshape", {RandomTensor(rng, {a, b, c})},
      [a, b, c](DTape&, In in) { return nn::Reshape(in[0], {a * b, c}); });
  add("permute", {RandomTensor(rng, {a, b, c})},
      [](DTape&, In in) { return nn::Permute(in[0], {2, 0, 1}); });
  add("concat", {RandomTensor(rng, {a, b}), RandomTensor(rng, {a, c})},
      [](DTape&, In in) { return nn::Concat<double>({in[0], in[1]}, 1); });
  add("slice", {RandomTensor(rng, {a, c + 1, b})},
      [](DTape&, In in) { return nn::Slice(in[0], 1, 1, 2); });
  add("softmax", {RandomTensor(rng, {a, c})},
      [](DTape&, In in) { return nn::Softmax(in[0]); });
  add("log_softmax", {RandomTensor(rng, {a, c})},
      [](DTape&, In in) { return nn::LogSoftmax(in[0]); });
  add("layernorm", {RandomTensor(rng, {a, c + 1}), RandomTensor(rng, {c + 1}),
                    RandomTensor(rng, {c + 1})},
      [](DTape&, In in) { return nn::LayerNorm(in[0], in[1], in[2]); });
  add("gelu", {RandomTensor(rng, {a, c})}, [](DTape&, In in) { return nn::Gelu(in[0]); });
  add("tanh", {RandomTensor(rng, {a, c})}, [](DTape&, In in) { return nn::Tanh(in[0]); });
  add("sum", {RandomTensor(rng, {a, c})}, [](DTape&, In in) { return nn::Sum(in[0]); });
  add("mean", {RandomTensor(rng, {a, c})}, [](DTape&, In in) { return nn::Mean(in[0]); });
  add("mean_axis", {RandomTensor(rng, {a, b, c})},
      [](DTape&, In in) { return nn::MeanAxis(in[0], 1); });
  std::vector<int> columns(a);
  for (int& k : columns) k = static_cast<int>(rng.Below(c));
  add("select_columns", {RandomTensor(rng, {a, c})},
      [columns](DTape&, In in) { return nn::SelectColumns<double>(in[0], columns); });
  add("cross_entropy", {RandomTensor(rng, {a, c})},
      [columns](DTape&, In in) { return nn::CrossEntropy<double>(in[0], columns); });
  return cases;
}

/// Softmax cross-entropy on one random 5-logit row.
inline GradCase CrossEntropyFiveLogitCase(uint64_t seed) {
  Rng rng(seed);
  const int label = static_cast<int>(rng.Below(5));
  return {"cross_entropy_5",
          [label](DTape&, const std::vector<DVar>& in) {
            const int labels[1] = {label};
            return nn::CrossEntropy<double>(in[0], labels);
          },
          {RandomTensor(rng, {1, 5})}};
}

/// One-block ViT with LoRA, DINO head and DINO loss on a 2-image batch.
/// Gradients flow to the adapters and head; the base stays constant.
inline GradCase VitLoraDinoCase(uint64_t seed) {
  nn::ViTConfig vit;
  vit.net_px = 8;
  vit.patch_embed_px = 4;
  vit.embed_dim = 8;
  vit.depth = 1;
  vit.heads = 2;
  vit.mlp_ratio = 2;
  nn::LoRAConfig lora;
  lora.rank = 2;
  lora.alpha = 4.0;
  nn::DinoConfig dino;
  dino.out_dim = 6;
  dino.head_hidden = 8;

  Rng rng = Rng::Derive(seed, {0x564C44});
  const auto base = nn::CastParams<double>(nn::InitViT(vit, seed));
  nn::Params trainable_f = nn::InitLoRA(vit, lora, seed);
  // Nonzero B so gradients reach A as well.
  for (auto& [name, t] : trainable_f) {
    if (name.ends_with(".B")) {
      for (float& v : t.data) v = static_cast<float>(0.3 * rng.Normal());
    }
  }
  nn::Merge(trainable_f, nn::InitDinoHead(vit.embed_dim, dino, seed));
  const auto trainable = nn::CastParams<double>(trainable_f);

  std::vector<std::string> names;
  std::vector<DTensor> inputs;
  for (const auto& [name, t] : trainable) {
    names.push_back(name);
    inputs.push_back(t);
  }
  DTensor images({2, 3, vit.net_px, vit.net_px});
  for (double& v : images.data) v = rng.Uniform();
  const DTensor teacher = RandomTensor(rng, {2, dino.out_dim});
  const DTensor center = RandomTensor(rng, {dino.out_dim}, 0.1);

  auto fn = [=](DTape& tape, const std::vector<DVar>& in) {
    nn::VarMap<double> vars;
    for (const auto& [name, t] : base) vars.emplace(name, tape.Leaf(t));
    for (size_t i = 0; i < names.size(); ++i) vars.emplace(names[i], in[i]);
    DVar logits = nn::DinoLogits(tape, vit, lora, vars, tape.Leaf(images));
    return nn::DinoLoss(tape, logits, teacher, center, dino.tau_student, dino.tau_teacher);
  };
  return {"vit_lora_dino", fn, inputs};
}

}  // namespace frostmil::testing

#endif  // FROSTMIL_TESTS_GRAD_CASES_H_
