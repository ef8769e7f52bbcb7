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

#include "frostmil/nn/grad_check.h"

#include <cmath>

namespace frostmil::nn {
namespace {

template <typename T>
T Evaluate(const ScalarFn<T>& fn, const std::vector<BasicTensor<T>>& inputs) {
  Tape<T> tape;
  std::vector<Var<T>> vars;
  for (const auto& x : inputs) vars.push_back(tape.Leaf(x, false));
  const Var<T> out = fn(tape, vars);
  return out.value().data.at(0);
}

}  // namespace

template <typename T>
GradCheckResult GradCheck(const ScalarFn<T>& fn,
                          const std::vector<BasicTensor<T>>& inputs,
                          double eps) {
  Tape<T> tape;
  std::vector<Var<T>> vars;
  for (const auto& x : inputs) vars.push_back(tape.Leaf(x, true));
  const Var<T> out = fn(tape, vars);
  tape.Backward(out);

  GradCheckResult result;
  std::vector<BasicTensor<T>> probe = inputs;
  for (size_t p = 0; p < inputs.size(); ++p) {
    const BasicTensor<T> analytic = tape.GradOrZeros(vars[p].id);
    for (size_t i = 0; i < inputs[p].numel(); ++i) {
      const T original = probe[p].data[i];
      probe[p].data[i] = original + static_cast<T>(eps);
      const double plus = static_cast<double>(Evaluate(fn, probe));
      probe[p].data[i] = original - static_cast<T>(eps);
      const double minus = static_cast<double>(Evaluate(fn, probe));
      probe[p].data[i] = original;

      const double numeric = (plus - minus) / (2.0 * eps);
      const double ad = static_cast<double>(analytic.data[i]);
      const double rel = std::abs(ad - numeric) / (std::abs(numeric) + 1e-8);
      if (rel > result.max_rel_error) {
        result = {rel, p, i, ad, numeric};
      }
    }
  }
  return result;
}

template GradCheckResult GradCheck<float>(const ScalarFn<float>&,
                                          const std::vector<BasicTensor<float>>&,
                                          double);
template GradCheckResult GradCheck<double>(const ScalarFn<double>&,
                                           const std::vector<BasicTensor<double>>&,
                                           double);

}  // namespace frostmil::nn
