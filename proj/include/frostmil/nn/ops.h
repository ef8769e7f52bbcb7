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

#ifndef FROSTMIL_NN_OPS_H_
#define FROSTMIL_NN_OPS_H_

#include <span>
#include <vector>

#include "frostmil/nn/tape.h"

namespace frostmil::nn {

// Differentiable primitives. Binary elementwise ops broadcast `b` over the
// leading axes of `a` when b's shape is a suffix of a's shape. Softmax-type
// and normalization ops act on the last axis. Shape mismatches throw
// ValidationError naming both shapes.

template <typename T> Var<T> Add(Var<T> a, Var<T> b);
template <typename T> Var<T> Sub(Var<T> a, Var<T> b);
template <typename T> Var<T> Mul(Var<T> a, Var<T> b);
template <typename T> Var<T> Scale(Var<T> a, T factor);

/// x[..., in] * W[out, in]^T + bias[out]. Pass an invalid Var for no bias.
template <typename T> Var<T> Linear(Var<T> x, Var<T> weight, Var<T> bias);

/// Batched a[..., m, k] x b[..., k, n] (or b[..., n, k] when transpose_b).
/// Leading axes must match exactly.
template <typename T>
Var<T> BatchMatMul(Var<T> a, Var<T> b, bool transpose_b = false);

template <typename T> Var<T> Reshape(Var<T> a, Shape shape);
template <typename T> Var<T> Permute(Var<T> a, std::vector<int> perm);
template <typename T> Var<T> Concat(const std::vector<Var<T>>& parts, int axis);
template <typename T> Var<T> Slice(Var<T> a, int axis, int start, int length);

template <typename T> Var<T> Softmax(Var<T> a);
template <typename T> Var<T> LogSoftmax(Var<T> a);
template <typename T>
Var<T> LayerNorm(Var<T> x, Var<T> gamma, Var<T> beta, T eps = T(1e-5));
template <typename T> Var<T> Gelu(Var<T> a);
template <typename T> Var<T> Tanh(Var<T> a);

/// Reductions to shape [1].
template <typename T> Var<T> Sum(Var<T> a);
template <typename T> Var<T> Mean(Var<T> a);
/// Mean over one axis, which is removed from the shape.
template <typename T> Var<T> MeanAxis(Var<T> a, int axis);

/// a[N, C] -> [N] picking column index[n] of each row.
template <typename T> Var<T> SelectColumns(Var<T> a, std::span<const int> index);

/// Mean negative log-likelihood of `labels` under softmax(logits[N, C]).
template <typename T>
Var<T> CrossEntropy(Var<T> logits, std::span<const int> labels);

/// Row softmax on plain tensors (no tape), last axis.
template <typename T>
BasicTensor<T> SoftmaxRows(const BasicTensor<T>& logits, T temperature = T(1));

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_OPS_H_
