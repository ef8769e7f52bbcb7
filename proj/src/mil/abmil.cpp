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

#include "frostmil/mil/abmil.h"

#include <cmath>

#include "frostmil/nn/checkpoint.h"
#include "frostmil/nn/ops.h"

namespace frostmil::mil {

using nn::Param;
using nn::Params;
using nn::Tensor;
using nn::Var;

void AbmilConfig::Validate() const {
  if (feature_dim < 1) throw ValidationError("abmil.feature_dim must be >= 1");
  if (hidden < 1) throw ValidationError("abmil.hidden must be >= 1");
  if (classes < 2) throw ValidationError("abmil.classes must be >= 2");
}

Json ToJson(const AbmilConfig& c) {
  return Json{{"feature_dim", c.feature_dim}, {"hidden", c.hidden}, {"classes", c.classes}};
}

AbmilConfig AbmilConfigFromJson(const Json& j) {
  AbmilConfig c;
  c.feature_dim = GetField<int>(j, "feature_dim", "abmil");
  c.hidden = GetField<int>(j, "hidden", "abmil");
  c.classes = GetField<int>(j, "classes", "abmil");
  c.Validate();
  return c;
}

Params InitAbmil(const AbmilConfig& c, uint64_t seed) {
  c.Validate();
  Rng rng = Rng::Derive(seed, {0x41424D49});
  Params p;
  const auto add = [&](const std::string& name, nn::Shape shape, int fan_in) {
    Tensor t(std::move(shape));
    nn::FillUniform(t, rng, 1.0 / std::sqrt(static_cast<double>(fan_in)));
    p.emplace(name, std::move(t));
  };
  add("abmil.V", {c.hidden, c.feature_dim}, c.feature_dim);
  add("abmil.w", {c.hidden}, c.hidden);
  add("abmil.cls.weight", {c.classes, c.feature_dim}, c.feature_dim);
  add("abmil.cls.bias", {c.classes}, c.feature_dim);
  return p;
}

template <typename T>
AbmilGraph<T> ForwardAbmil(const nn::VarMap<T>& params, Var<T> features) {
  const Var<T> V = Param(params, "abmil.V");
  const nn::Shape& fs = features.shape();
  if (fs.size() != 2 || fs[0] < 1 || fs[1] != V.shape()[1]) {
    throw ValidationError("abmil: bag features " + nn::ShapeString(fs) +
                          " do not match feature dim of V " + nn::ShapeString(V.shape()));
  }
  const int n = fs[0];
  const int F = fs[1];
  const int L = V.shape()[0];
  Var<T> hidden = nn::Tanh(nn::Linear(features, V, Var<T>{}));
  Var<T> w = nn::Reshape(Param(params, "abmil.w"), nn::Shape{1, L});
  Var<T> scores = nn::Reshape(nn::Linear(hidden, w, Var<T>{}), nn::Shape{1, n});
  Var<T> attention = nn::Softmax(scores);
  Var<T> pooled = nn::Reshape(
      nn::BatchMatMul(nn::Reshape(attention, nn::Shape{1, 1, n}),
                      nn::Reshape(features, nn::Shape{1, n, F})),
      nn::Shape{1, F});
  Var<T> logits =
      nn::Linear(pooled, Param(params, "abmil.cls.weight"), Param(params, "abmil.cls.bias"));
  return {logits, attention, pooled};
}

AbmilOutput RunAbmil(const Params& params, const Tensor& features) {
  nn::Tape<float> tape;
  const auto vars = nn::Bind(tape, params);
  const AbmilGraph<float> g = ForwardAbmil(vars, tape.Leaf(features));
  AbmilOutput out;
  out.probs = nn::SoftmaxRows(g.logits.value()).data;
  out.attention = g.attention.value().data;
  out.pooled = g.pooled.value().data;
  return out;
}

void SaveAbmil(const std::filesystem::path& dir, const AbmilConfig& config, const Params& params,
               const Json& extra) {
  Json meta = extra;
  meta["kind"] = "abmil";
  meta["abmil"] = ToJson(config);
  nn::SaveCheckpoint(dir, meta, params);
}

std::pair<AbmilConfig, Params> LoadAbmil(const std::filesystem::path& dir) {
  nn::Checkpoint ckpt = nn::LoadCheckpoint(dir);
  if (!ckpt.config.contains("kind") || ckpt.config.at("kind") != "abmil") {
    throw ValidationError(dir.string() + ": not an aggregator checkpoint");
  }
  return {AbmilConfigFromJson(ckpt.config.at("abmil")), std::move(ckpt.params)};
}

template AbmilGraph<float> ForwardAbmil(const nn::VarMap<float>&, Var<float>);
template AbmilGraph<double> ForwardAbmil(const nn::VarMap<double>&, Var<double>);

}  // namespace frostmil::mil
