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

#ifndef FROSTMIL_NN_GRAD_CHECK_H_
#define FROSTMIL_NN_GRAD_CHECK_H_

#include <functional>
#include <vector>

#include "frostmil/nn/tape.h"

namespace frostmil::nn {

/// Scalar-valued function of leaf variables, recorded on the given tape.
template <typename T>
using ScalarFn =
    std::function<Var<T>(Tape<T>&, const std::vector<Var<T>>& inputs)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  size_t worst_input = 0;
  size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares tape gradients against central differences for every element
/// of every input: max |g_ad - g_fd| / (|g_fd| + 1e-8).
template <typename T>
GradCheckResult GradCheck(const ScalarFn<T>& fn,
                          const std::vector<BasicTensor<T>>& inputs,
                          double eps = 1e-3);

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_GRAD_CHECK_H_
