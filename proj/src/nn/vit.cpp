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

#include "frostmil/nn/vit.h"

#include <cmath>
#include <string>

#include "frostmil/nn/ops.h"

namespace frostmil::nn {

ViTConfig ViTConfig::Toy() {
  ViTConfig c;
  c.net_px = 32;
  c.patch_embed_px = 8;
  c.embed_dim = 64;
  c.depth = 2;
  c.heads = 4;
  c.mlp_ratio = 4;
  return c;
}

void ViTConfig::Validate() const {
  if (net_px <= 0 || patch_embed_px <= 0 || net_px % patch_embed_px != 0) {
    throw ValidationError("vit: net_px must be divisible by patch_embed_px");
  }
  if (embed_dim <= 0 || heads <= 0 || embed_dim % heads != 0) {
    throw ValidationError("vit: embed_dim must be divisible by heads");
  }
  if (depth < 1 || mlp_ratio < 1) {
    throw ValidationError("vit: depth and mlp_ratio must be >= 1");
  }
}

Json ToJson(const ViTConfig& c) {
  return Json{{"net_px", c.net_px},       {"patch_embed_px", c.patch_embed_px},
              {"embed_dim", c.embed_dim}, {"depth", c.depth},
              {"heads", c.heads},         {"mlp_ratio", c.mlp_ratio}};
}

Json ToJson(const LoRAConfig& c) {
  return Json{{"rank", c.rank}, {"alpha", c.alpha},
              {"query", c.query}, {"value", c.value}};
}

ViTConfig ViTConfigFromJson(const Json& j) {
  ViTConfig c;
  c.net_px = GetField<int>(j, "net_px", "vit");
  c.patch_embed_px = GetField<int>(j, "patch_embed_px", "vit");
  c.embed_dim = GetField<int>(j, "embed_dim", "vit");
  c.depth = GetField<int>(j, "depth", "vit");
  c.heads = GetField<int>(j, "heads", "vit");
  c.mlp_ratio = GetField<int>(j, "mlp_ratio", "vit");
  c.Validate();
  return c;
}

LoRAConfig LoRAConfigFromJson(const Json& j) {
  LoRAConfig c;
  c.rank = GetField<int>(j, "rank", "lora");
  c.alpha = GetField<double>(j, "alpha", "lora");
  c.query = GetField<bool>(j, "query", "lora");
  c.value = GetField<bool>(j, "value", "lora");
  if (c.rank < 1) throw ValidationError("lora.rank must be >= 1");
  return c;
}

namespace {

std::string Block(int i) { return "vit.blocks." + std::to_string(i) + "."; }

void AddLinear(Params& p, Rng& rng, const std::string& name, int out, int in) {
  Tensor w({out, in});
  FillUniform(w, rng, 1.0 / std::sqrt(static_cast<double>(in)));
  p[name + ".weight"] = std::move(w);
  p[name + ".bias"] = Tensor({out});
}

void AddNorm(Params& p, const std::string& name, int dim) {
  p[name + ".gamma"] = Tensor({dim}, 1.0f);
  p[name + ".beta"] = Tensor({dim});
}

template <typename T>
Var<T> Dense(const VarMap<T>& p, const std::string& name, Var<T> x) {
  return Linear(x, Param(p, name + ".weight"), Param(p, name + ".bias"));
}

template <typename T>
Var<T> Norm(const VarMap<T>& p, const std::string& name, Var<T> x) {
  return LayerNorm(x, Param(p, name + ".gamma"), Param(p, name + ".beta"));
}

}  // namespace

template <typename T>
Var<T> AdaptedProjection(const VarMap<T>& p, const std::string& base,
                         const std::string& adapter, T scale, Var<T> x) {
  Var<T> y = Dense(p, base, x);
  auto a = p.find(adapter + ".A");
  auto b = p.find(adapter + ".B");
  if (a == p.end() || b == p.end()) return y;
  Var<T> none;
  Var<T> delta = Linear(Linear(x, a->second, none), b->second, none);
  return Add(y, Scale(delta, scale));
}

Params InitViT(const ViTConfig& c, uint64_t seed) {
  c.Validate();
  Rng rng = Rng::Derive(seed, {0x564954});
  Params p;
  const int D = c.embed_dim;
  const int patch_dim = 3 * c.patch_embed_px * c.patch_embed_px;
  AddLinear(p, rng, "vit.patch_embed", D, patch_dim);
  Tensor cls({D});
  FillNormal(cls, rng, 0.02);
  p["vit.cls_token"] = std::move(cls);
  Tensor pos({c.tokens() + 1, D});
  FillNormal(pos, rng, 0.02);
  p["vit.pos_embed"] = std::move(pos);
  for (int i = 0; i < c.depth; ++i) {
    const std::string b = Block(i);
    AddNorm(p, b + "norm1", D);
    AddLinear(p, rng, b + "attn.q", D, D);
    AddLinear(p, rng, b + "attn.k", D, D);
    AddLinear(p, rng, b + "attn.v", D, D);
    AddLinear(p, rng, b + "attn.proj", D, D);
    AddNorm(p, b + "norm2", D);
    AddLinear(p, rng, b + "mlp.fc1", D * c.mlp_ratio, D);
    AddLinear(p, rng, b + "mlp.fc2", D, D * c.mlp_ratio);
  }
  AddNorm(p, "vit.norm", D);
  return p;
}

Params InitLoRA(const ViTConfig& c, const LoRAConfig& lora, uint64_t seed) {
  Rng rng = Rng::Derive(seed, {0x4C4F5241});
  Params p;
  const int D = c.embed_dim;
  for (int i = 0; i < c.depth; ++i) {
    for (const char* target : {"q", "v"}) {
      if ((target[0] == 'q' && !lora.query) || (target[0] == 'v' && !lora.value)) {
        continue;
      }
      const std::string name =
          "lora.blocks." + std::to_string(i) + "." + target;
      Tensor a({lora.rank, D});
      FillUniform(a, rng, 1.0 / std::sqrt(static_cast<double>(D)));
      p[name + ".A"] = std::move(a);
      p[name + ".B"] = Tensor({D, lora.rank});
    }
  }
  return p;
}

template <typename T>
Var<T> ForwardViT(Tape<T>& tape, const ViTConfig& c, const LoRAConfig& lora,
                  const VarMap<T>& p, Var<T> images) {
  const Shape& s = images.shape();
  if (s.size() != 4 || s[1] != 3 || s[2] != c.net_px || s[3] != c.net_px) {
    throw ValidationError("vit: expected images [B, 3, " +
                          std::to_string(c.net_px) + ", " +
                          std::to_string(c.net_px) + "], got " + ShapeString(s));
  }
  const int B = s[0];
  const int g = c.grid();
  const int ps = c.patch_embed_px;
  const int D = c.embed_dim;
  const int N = c.tokens() + 1;
  const int H = c.heads;
  const int dh = D / H;

  // [B,3,g*ps,g*ps] -> [B, g*g, 3*ps*ps]
  Var<T> patches = Reshape(images, {B, 3, g, ps, g, ps});
  patches = Permute(patches, {0, 2, 4, 1, 3, 5});
  patches = Reshape(patches, {B, g * g, 3 * ps * ps});
  Var<T> tokens = Dense(p, "vit.patch_embed", patches);

  Var<T> cls = Add(tape.Leaf(BasicTensor<T>({B, 1, D})), Param(p, "vit.cls_token"));
  Var<T> x = Concat<T>({cls, tokens}, 1);
  x = Add(x, Param(p, "vit.pos_embed"));

  const T scale = static_cast<T>(lora.scale());
  const T attn_scale = T(1) / std::sqrt(static_cast<T>(dh));
  auto split_heads = [&](Var<T> t) {
    return Permute(Reshape(t, {B, N, H, dh}), {0, 2, 1, 3});
  };
  for (int i = 0; i < c.depth; ++i) {
    const std::string b = Block(i);
    const std::string a = "lora.blocks." + std::to_string(i) + ".";
    Var<T> h = Norm(p, b + "norm1", x);
    Var<T> q = split_heads(AdaptedProjection(p, b + "attn.q", a + "q", scale, h));
    Var<T> k = split_heads(Dense(p, b + "attn.k", h));
    Var<T> v = split_heads(AdaptedProjection(p, b + "attn.v", a + "v", scale, h));
    Var<T> att = Softmax(Scale(BatchMatMul(q, k, true), attn_scale));
    Var<T> ctx = BatchMatMul(att, v);
    ctx = Reshape(Permute(ctx, {0, 2, 1, 3}), {B, N, D});
    x = Add(x, Dense(p, b + "attn.proj", ctx));

    Var<T> m = Norm(p, b + "norm2", x);
    m = Dense(p, b + "mlp.fc2", Gelu(Dense(p, b + "mlp.fc1", m)));
    x = Add(x, m);
  }
  return Norm(p, "vit.norm", x);
}

template <typename T>
Var<T> PooledFeature(Var<T> tokens) {
  const Shape& s = tokens.shape();
  if (s.size() != 3 || s[1] < 2) {
    throw ValidationError("pooled feature: expected [B, 1+T, D], got " +
                          ShapeString(s));
  }
  const int B = s[0];
  const int D = s[2];
  Var<T> cls = Reshape(Slice(tokens, 1, 0, 1), {B, D});
  Var<T> mean = MeanAxis(Slice(tokens, 1, 1, s[1] - 1), 1);
  return Concat<T>({cls, mean}, 1);
}

Params Encoder::AllParams() const {
  Params all = base;
  Merge(all, adapters);
  return all;
}

Tensor ExtractFeatures(const Encoder& encoder, const Tensor& images) {
  Tape<float> tape;
  const Params all = encoder.AllParams();
  const VarMap<float> vars = Bind(tape, all);
  Var<float> tokens =
      ForwardViT(tape, encoder.vit, encoder.lora, vars, tape.Leaf(images));
  return PooledFeature(tokens).value();
}

ModelSummary Summarize(const Encoder& encoder) {
  ModelSummary s;
  s.trainable = CountParams(encoder.adapters);
  s.total = CountParams(encoder.base) + s.trainable;
  return s;
}

template Var<float> ForwardViT(Tape<float>&, const ViTConfig&, const LoRAConfig&,
                               const VarMap<float>&, Var<float>);
template Var<double> ForwardViT(Tape<double>&, const ViTConfig&, const LoRAConfig&,
                                const VarMap<double>&, Var<double>);
template Var<float> AdaptedProjection(const VarMap<float>&, const std::string&,
                                      const std::string&, float, Var<float>);
template Var<double> AdaptedProjection(const VarMap<double>&, const std::string&,
                                       const std::string&, double, Var<double>);
template Var<float> PooledFeature(Var<float>);
template Var<double> PooledFeature(Var<double>);

}  // namespace frostmil::nn
