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

#ifndef FROSTMIL_NN_PARAMS_H_
#define FROSTMIL_NN_PARAMS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "frostmil/common/rng.h"
#include "frostmil/nn/tape.h"

namespace frostmil::nn {

/// Named parameters, iterated in name order (the checkpoint order).
template <typename T>
using ParamMap = std::map<std::string, BasicTensor<T>>;
using Params = ParamMap<float>;

template <typename T>
using VarMap = std::map<std::string, Var<T>>;

using NamePredicate = std::function<bool(const std::string&)>;

inline NamePredicate PrefixIn(std::vector<std::string> prefixes) {
  return [prefixes = std::move(prefixes)](const std::string& name) {
    for (const auto& p : prefixes) {
      if (name.rfind(p, 0) == 0) return true;
    }
    return false;
  };
}

/// Records every parameter as a leaf; `trainable` selects requires_grad.
template <typename T>
VarMap<T> Bind(Tape<T>& tape, const ParamMap<T>& params,
               const NamePredicate& trainable = nullptr) {
  VarMap<T> vars;
  for (const auto& [name, value] : params) {
    vars.emplace(name, tape.Leaf(value, trainable && trainable(name)));
  }
  return vars;
}

/// Gradients of the trainable entries of `vars` (zeros when none flowed).
template <typename T>
ParamMap<T> CollectGrads(const Tape<T>& tape, const VarMap<T>& vars) {
  ParamMap<T> grads;
  for (const auto& [name, var] : vars) {
    if (tape.requires_grad(var.id)) grads.emplace(name, tape.GradOrZeros(var.id));
  }
  return grads;
}

template <typename U, typename T>
ParamMap<U> CastParams(const ParamMap<T>& params) {
  ParamMap<U> out;
  for (const auto& [name, value] : params) out.emplace(name, value.template Cast<U>());
  return out;
}

/// Looks up a bound parameter, naming it in the error when absent.
template <typename T>
Var<T> Param(const VarMap<T>& vars, const std::string& name) {
  auto it = vars.find(name);
  if (it == vars.end()) throw ValidationError("missing parameter '" + name + "'");
  return it->second;
}

size_t CountParams(const Params& params, const NamePredicate& filter = nullptr);

/// FNV-1a over names, shapes and raw float bytes.
uint64_t Checksum(const Params& params, const NamePredicate& filter = nullptr);

void FillUniform(Tensor& tensor, Rng& rng, double bound);
void FillNormal(Tensor& tensor, Rng& rng, double stddev);

/// Entries whose names start with `prefix`, optionally re-prefixed.
Params Subset(const Params& params, std::string_view prefix,
              std::string_view replacement = {});
void Merge(Params& into, const Params& from);

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_PARAMS_H_
