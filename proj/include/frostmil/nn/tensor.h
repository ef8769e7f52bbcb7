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

#ifndef FROSTMIL_NN_TENSOR_H_
#define FROSTMIL_NN_TENSOR_H_

#include <cstddef>
#include <string>
#include <vector>

#include "frostmil/common/error.h"

namespace frostmil::nn {

using Shape = std::vector<int>;

size_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

/// Dense row-major tensor. Production code uses float; the autodiff kernels
/// are also instantiated for double so gradient checks are not limited by
/// fp32 round-off in the finite differences.
template <typename T>
struct BasicTensor {
  Shape shape;
  std::vector<T> data;

  BasicTensor() = default;
  explicit BasicTensor(Shape s, T fill = T(0))
      : shape(std::move(s)), data(NumElements(shape), fill) {}
  BasicTensor(Shape s, std::vector<T> values)
      : shape(std::move(s)), data(std::move(values)) {
    if (data.size() != NumElements(shape)) {
      throw ValidationError("tensor data length " +
                            std::to_string(data.size()) +
                            " does not match shape " + ShapeString(shape));
    }
  }

  size_t numel() const { return data.size(); }
  int rank() const { return static_cast<int>(shape.size()); }
  /// Size of axis `axis`; negative counts from the end.
  int dim(int axis) const {
    return shape[static_cast<size_t>(axis < 0 ? rank() + axis : axis)];
  }
  bool empty() const { return data.empty(); }

  T& operator[](size_t i) { return data[i]; }
  const T& operator[](size_t i) const { return data[i]; }

  template <typename U>
  BasicTensor<U> Cast() const {
    BasicTensor<U> out;
    out.shape = shape;
    out.data.assign(data.begin(), data.end());
    return out;
  }

  bool operator==(const BasicTensor&) const = default;
};

using Tensor = BasicTensor<float>;

inline size_t NumElements(const Shape& shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

inline std::string ShapeString(const Shape& shape) {
  std::string out = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_TENSOR_H_
