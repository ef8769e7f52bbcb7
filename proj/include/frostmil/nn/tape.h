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

#ifndef FROSTMIL_NN_TAPE_H_
#define FROSTMIL_NN_TAPE_H_

#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "frostmil/common/error.h"
#include "frostmil/nn/tensor.h"

namespace frostmil::nn {

template <typename T>
class Tape;

/// Handle to a node recorded on a Tape.
template <typename T>
struct Var {
  Tape<T>* tape = nullptr;
  int id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
  const BasicTensor<T>& value() const { return tape->value(id); }
  const Shape& shape() const { return value().shape; }
};

/// Reverse-mode tape. Nodes are appended in evaluation order, which is a
/// topological order, so Backward walks ids downward and visits each node
/// once.
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int self)>;

  struct Node {
    BasicTensor<T> value;
    BasicTensor<T> grad;
    bool requires_grad = false;
    std::vector<int> inputs;
    BackwardFn backward;
    const char* op = "leaf";
  };

  Tape() {
#ifndef NDEBUG
    check_finite_ = true;
#endif
  }

  /// Finite-value checking after every op (on by default in debug builds).
  void set_check_finite(bool on) { check_finite_ = on; }

  Var<T> Leaf(BasicTensor<T> value, bool requires_grad = false) {
    Node node;
    node.value = std::move(value);
    node.requires_grad = requires_grad;
    nodes_.push_back(std::move(node));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  /// Appends an op output. The backward closure is kept only if some input
  /// requires a gradient.
  Var<T> Record(const char* op, BasicTensor<T> value, std::vector<int> inputs,
                BackwardFn backward) {
    if (check_finite_) {
      for (const T& v : value.data) {
        if (!std::isfinite(v)) {
          throw NumericError(std::string("non-finite value produced by ") + op);
        }
      }
    }
    Node node;
    node.value = std::move(value);
    node.op = op;
    for (int in : inputs) node.requires_grad |= nodes_[in].requires_grad;
    if (node.requires_grad) node.backward = std::move(backward);
    node.inputs = std::move(inputs);
    nodes_.push_back(std::move(node));
    return {this, static_cast<int>(nodes_.size()) - 1};
  }

  const BasicTensor<T>& value(int id) const { return nodes_[id].value; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  size_t size() const { return nodes_.size(); }

  /// Gradient accumulated so far; empty when nothing flowed into the node.
  const BasicTensor<T>& grad(int id) const { return nodes_[id].grad; }

  /// Gradient or zeros of the value's shape.
  BasicTensor<T> GradOrZeros(int id) const {
    const Node& n = nodes_[id];
    return n.grad.empty() ? BasicTensor<T>(n.value.shape) : n.grad;
  }

  /// Lazily allocated gradient buffer for accumulation by backward closures.
  BasicTensor<T>& MutableGrad(int id) {
    Node& n = nodes_[id];
    if (n.grad.empty()) n.grad = BasicTensor<T>(n.value.shape);
    return n.grad;
  }

  void Backward(Var<T> root) {
    if (root.tape != this) throw ValidationError("Backward: foreign variable");
    if (nodes_[root.id].value.numel() != 1) {
      throw ValidationError("Backward: root must be a scalar, got shape " +
                            ShapeString(nodes_[root.id].value.shape));
    }
    MutableGrad(root.id).data[0] = T(1);
    for (int i = root.id; i >= 0; --i) {
      Node& n = nodes_[i];
      if (n.backward && !n.grad.empty()) n.backward(*this, i);
    }
  }

 private:
  std::deque<Node> nodes_;
  bool check_finite_ = false;
};

}  // namespace frostmil::nn

#endif  // FROSTMIL_NN_TAPE_H_
