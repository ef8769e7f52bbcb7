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

#include "frostmil/nn/ops.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace frostmil::nn {
namespace {

template <typename T>
void RequireSameTape(Var<T> a, Var<T> b, const char* op) {
  if (!a.valid() || !b.valid() || a.tape != b.tape) {
    throw ValidationError(std::string(op) + ": operands on different tapes");
  }
}

bool IsSuffix(const Shape& full, const Shape& suffix) {
  if (suffix.size() > full.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), full.rbegin());
}

[[noreturn]] void ShapeError(const char* op, const Shape& a, const Shape& b) {
  throw ValidationError(std::string(op) + ": shape mismatch " + ShapeString(a) +
                        " vs " + ShapeString(b));
}

// Product of dims [0, axis) and (axis, end).
std::pair<size_t, size_t> OuterInner(const Shape& s, int axis) {
  size_t outer = 1;
  size_t inner = 1;
  for (int i = 0; i < axis; ++i) outer *= s[i];
  for (size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
  return {outer, inner};
}

int NormalizeAxis(int axis, int rank, const char* op) {
  if (axis < 0) axis += rank;
  if (axis < 0 || axis >= rank) {
    throw ValidationError(std::string(op) + ": axis out of range");
  }
  return axis;
}

enum class Binary { kAdd, kSub, kMul };

template <typename T>
Var<T> BroadcastBinary(Var<T> a, Var<T> b, Binary kind, const char* op) {
  RequireSameTape(a, b, op);
  Tape<T>& tape = *a.tape;
  const auto& av = a.value();
  const auto& bv = b.value();
  if (!IsSuffix(av.shape, bv.shape)) ShapeError(op, av.shape, bv.shape);
  const size_t nb = bv.numel();
  BasicTensor<T> out(av.shape);
  for (size_t i = 0; i < av.numel(); ++i) {
    const T x = av.data[i];
    const T y = bv.data[i % nb];
    out.data[i] = kind == Binary::kAdd ? x + y : kind == Binary::kSub ? x - y : x * y;
  }
  const int ia = a.id;
  const int ib = b.id;
  return tape.Record(op, std::move(out), {ia, ib}, [ia, ib, kind](Tape<T>& t, int self) {
    const auto& gy = t.grad(self).data;
    const size_t nb = t.value(ib).numel();
    if (t.requires_grad(ia)) {
      auto& ga = t.MutableGrad(ia).data;
      if (kind == Binary::kMul) {
        const auto& bv = t.value(ib).data;
        for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * bv[i % nb];
      } else {
        for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
      }
    }
    if (t.requires_grad(ib)) {
      auto& gb = t.MutableGrad(ib).data;
      if (kind == Binary::kMul) {
        const auto& av = t.value(ia).data;
        for (size_t i = 0; i < gy.size(); ++i) gb[i % nb] += gy[i] * av[i];
      } else {
        const T sign = kind == Binary::kSub ? T(-1) : T(1);
        for (size_t i = 0; i < gy.size(); ++i) gb[i % nb] += sign * gy[i];
      }
    }
  });
}

}  // namespace

template <typename T>
Var<T> Add(Var<T> a, Var<T> b) {
  return BroadcastBinary(a, b, Binary::kAdd, "add");
}

template <typename T>
Var<T> Sub(Var<T> a, Var<T> b) {
  return BroadcastBinary(a, b, Binary::kSub, "sub");
}

template <typename T>
Var<T> Mul(Var<T> a, Var<T> b) {
  return BroadcastBinary(a, b, Binary::kMul, "mul");
}

template <typename T>
Var<T> Scale(Var<T> a, T factor) {
  BasicTensor<T> out = a.value();
  for (T& v : out.data) v *= factor;
  const int ia = a.id;
  return a.tape->Record("scale", std::move(out), {ia}, [ia, factor](Tape<T>& t, int self) {
    const auto& gy = t.grad(self).data;
    auto& ga = t.MutableGrad(ia).data;
    for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * factor;
  });
}

template <typename T>
Var<T> Linear(Var<T> x, Var<T> weight, Var<T> bias) {
  RequireSameTape(x, weight, "linear");
  const auto& xv = x.value();
  const auto& wv = weight.value();
  if (wv.rank() != 2 || xv.rank() < 1 || xv.dim(-1) != wv.dim(1)) {
    ShapeError("linear", xv.shape, wv.shape);
  }
  const size_t in = static_cast<size_t>(wv.dim(1));
  const size_t out_dim = static_cast<size_t>(wv.dim(0));
  const size_t rows = xv.numel() / in;
  const bool has_bias = bias.valid();
  if (has_bias) {
    RequireSameTape(x, bias, "linear");
    if (bias.value().numel() != out_dim) {
      ShapeError("linear(bias)", bias.shape(), wv.shape);
    }
  }
  Shape out_shape = xv.shape;
  out_shape.back() = static_cast<int>(out_dim);
  BasicTensor<T> out(out_shape);
  for (size_t r = 0; r < rows; ++r) {
    const T* xr = &xv.data[r * in];
    T* yr = &out.data[r * out_dim];
    for (size_t o = 0; o < out_dim; ++o) {
      const T* wo = &wv.data[o * in];
      T acc = T(0);
      for (size_t i = 0; i < in; ++i) acc += xr[i] * wo[i];
      yr[o] = has_bias ? acc + bias.value().data[o] : acc;
    }
  }
  const int ix = x.id;
  const int iw = weight.id;
  const int ib = has_bias ? bias.id : -1;
  std::vector<int> inputs = {ix, iw};
  if (has_bias) inputs.push_back(ib);
  return x.tape->Record(
      "linear", std::move(out), std::move(inputs),
      [ix, iw, ib, rows, in, out_dim](Tape<T>& t, int self) {
        const auto& gy = t.grad(self).data;
        if (t.requires_grad(ix)) {
          const auto& wv = t.value(iw).data;
          auto& gx = t.MutableGrad(ix).data;
          for (size_t r = 0; r < rows; ++r) {
            T* gxr = &gx[r * in];
            for (size_t o = 0; o < out_dim; ++o) {
              const T g = gy[r * out_dim + o];
              if (g == T(0)) continue;
              const T* wo = &wv[o * in];
              for (size_t i = 0; i < in; ++i) gxr[i] += g * wo[i];
            }
          }
        }
        if (t.requires_grad(iw)) {
          const auto& xv = t.value(ix).data;
          auto& gw = t.MutableGrad(iw).data;
          for (size_t r = 0; r < rows; ++r) {
            const T* xr = &xv[r * in];
            for (size_t o = 0; o < out_dim; ++o) {
              const T g = gy[r * out_dim + o];
              if (g == T(0)) continue;
              T* gwo = &gw[o * in];
              for (size_t i = 0; i < in; ++i) gwo[i] += g * xr[i];
            }
          }
        }
        if (ib >= 0 && t.requires_grad(ib)) {
          auto& gb = t.MutableGrad(ib).data;
          for (size_t r = 0; r < rows; ++r) {
            for (size_t o = 0; o < out_dim; ++o) gb[o] += gy[r * out_dim + o];
          }
        }
      });
}

template <typename T>
Var<T> BatchMatMul(Var<T> a, Var<T> b, bool transpose_b) {
  RequireSameTape(a, b, "batch_matmul");
  const auto& av = a.value();
  const auto& bv = b.value();
  if (av.rank() < 2 || bv.rank() != av.rank()) {
    ShapeError("batch_matmul", av.shape, bv.shape);
  }
  for (int i = 0; i < av.rank() - 2; ++i) {
    if (av.shape[i] != bv.shape[i]) ShapeError("batch_matmul", av.shape, bv.shape);
  }
  const size_t m = av.dim(-2);
  const size_t k = av.dim(-1);
  const size_t n = transpose_b ? bv.dim(-2) : bv.dim(-1);
  const size_t kb = transpose_b ? bv.dim(-1) : bv.dim(-2);
  if (kb != k) ShapeError("batch_matmul", av.shape, bv.shape);
  const size_t batch = av.numel() / (m * k);

  Shape out_shape = av.shape;
  out_shape.back() = static_cast<int>(n);
  BasicTensor<T> out(out_shape);
  for (size_t bi = 0; bi < batch; ++bi) {
    const T* A = &av.data[bi * m * k];
    const T* B = &bv.data[bi * k * n];
    T* Y = &out.data[bi * m * n];
    for (size_t i = 0; i < m; ++i) {
      if (transpose_b) {
        for (size_t j = 0; j < n; ++j) {
          T acc = T(0);
          for (size_t p = 0; p < k; ++p) acc += A[i * k + p] * B[j * k + p];
          Y[i * n + j] = acc;
        }
      } else {
        for (size_t p = 0; p < k; ++p) {
          const T aip = A[i * k + p];
          for (size_t j = 0; j < n; ++j) Y[i * n + j] += aip * B[p * n + j];
        }
      }
    }
  }
  const int ia = a.id;
  const int ib = b.id;
  return a.tape->Record(
      "batch_matmul", std::move(out), {ia, ib},
      [ia, ib, batch, m, k, n, transpose_b](Tape<T>& t, int self) {
        const auto& gy = t.grad(self).data;
        const auto& av = t.value(ia).data;
        const auto& bv = t.value(ib).data;
        const bool need_a = t.requires_grad(ia);
        const bool need_b = t.requires_grad(ib);
        T* ga = need_a ? t.MutableGrad(ia).data.data() : nullptr;
        T* gb = need_b ? t.MutableGrad(ib).data.data() : nullptr;
        for (size_t bi = 0; bi < batch; ++bi) {
          const T* A = &av[bi * m * k];
          const T* B = &bv[bi * k * n];
          const T* G = &gy[bi * m * n];
          for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < n; ++j) {
              const T g = G[i * n + j];
              if (g == T(0)) continue;
              if (transpose_b) {
                // Y[i,j] = sum_p A[i,p] B[j,p]
                if (ga) {
                  T* gai = ga + bi * m * k + i * k;
                  for (size_t p = 0; p < k; ++p) gai[p] += g * B[j * k + p];
                }
                if (gb) {
                  T* gbj = gb + bi * k * n + j * k;
                  for (size_t p = 0; p < k; ++p) gbj[p] += g * A[i * k + p];
                }
              } else {
                // Y[i,j] = sum_p A[i,p] B[p,j]
                if (ga) {
                  T* gai = ga + bi * m * k + i * k;
                  for (size_t p = 0; p < k; ++p) gai[p] += g * B[p * n + j];
                }
                if (gb) {
                  T* gbb = gb + bi * k * n;
                  for (size_t p = 0; p < k; ++p) gbb[p * n + j] += g * A[i * k + p];
                }
              }
            }
          }
        }
      });
}

template <typename T>
Var<T> Reshape(Var<T> a, Shape shape) {
  if (NumElements(shape) != a.value().numel()) {
    ShapeError("reshape", a.shape(), shape);
  }
  BasicTensor<T> out(shape, a.value().data);
  const int ia = a.id;
  return a.tape->Record("reshape", std::move(out), {ia}, [ia](Tape<T>& t, int self) {
    const auto& gy = t.grad(self).data;
    auto& ga = t.MutableGrad(ia).data;
    for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
  });
}

template <typename T>
Var<T> Permute(Var<T> a, std::vector<int> perm) {
  const auto& av = a.value();
  const int rank = av.rank();
  if (static_cast<int>(perm.size()) != rank) {
    throw ValidationError("permute: permutation rank mismatch for " +
                          ShapeString(av.shape));
  }
  Shape out_shape(rank);
  for (int i = 0; i < rank; ++i) out_shape[i] = av.shape[perm[i]];
  std::vector<size_t> in_strides(rank, 1);
  for (int i = rank - 2; i >= 0; --i) {
    in_strides[i] = in_strides[i + 1] * av.shape[i + 1];
  }
  // source offset for each destination element
  std::vector<size_t> source(av.numel());
  std::vector<int> idx(rank, 0);
  for (size_t o = 0; o < source.size(); ++o) {
    size_t off = 0;
    for (int i = 0; i < rank; ++i) off += idx[i] * in_strides[perm[i]];
    source[o] = off;
    for (int i = rank - 1; i >= 0; --i) {
      if (++idx[i] < out_shape[i]) break;
      idx[i] = 0;
    }
  }
  BasicTensor<T> out(out_shape);
  for (size_t o = 0; o < source.size(); ++o) out.data[o] = av.data[source[o]];
  const int ia = a.id;
  return a.tape->Record("permute", std::move(out), {ia},
                        [ia, source = std::move(source)](Tape<T>& t, int self) {
                          const auto& gy = t.grad(self).data;
                          auto& ga = t.MutableGrad(ia).data;
                          for (size_t o = 0; o < gy.size(); ++o) {
                            ga[source[o]] += gy[o];
                          }
                        });
}

template <typename T>
Var<T> Concat(const std::vector<Var<T>>& parts, int axis) {
  if (parts.empty()) throw ValidationError("concat: no inputs");
  const Shape& first = parts.front().shape();
  axis = NormalizeAxis(axis, static_cast<int>(first.size()), "concat");
  Shape out_shape = first;
  out_shape[axis] = 0;
  std::vector<size_t> widths;
  std::vector<int> inputs;
  for (const auto& p : parts) {
    RequireSameTape(parts.front(), p, "concat");
    const Shape& s = p.shape();
    if (s.size() != first.size()) ShapeError("concat", first, s);
    for (size_t i = 0; i < s.size(); ++i) {
      if (static_cast<int>(i) != axis && s[i] != first[i]) {
        ShapeError("concat", first, s);
      }
    }
    out_shape[axis] += s[axis];
    widths.push_back(OuterInner(s, axis).second * s[axis]);
    inputs.push_back(p.id);
  }
  const size_t outer = OuterInner(first, axis).first;
  size_t row = 0;
  for (size_t w : widths) row += w;
  BasicTensor<T> out(out_shape);
  size_t offset = 0;
  for (size_t pi = 0; pi < parts.size(); ++pi) {
    const auto& pv = parts[pi].value().data;
    for (size_t o = 0; o < outer; ++o) {
      std::copy_n(&pv[o * widths[pi]], widths[pi], &out.data[o * row + offset]);
    }
    offset += widths[pi];
  }
  std::vector<int> ids = inputs;
  return parts.front().tape->Record(
      "concat", std::move(out), std::move(inputs),
      [ids, widths, outer, row](Tape<T>& t, int self) {
        const auto& gy = t.grad(self).data;
        size_t offset = 0;
        for (size_t pi = 0; pi < ids.size(); ++pi) {
          if (t.requires_grad(ids[pi])) {
            auto& g = t.MutableGrad(ids[pi]).data;
            for (size_t o = 0; o < outer; ++o) {
              for (size_t i = 0; i < widths[pi]; ++i) {
                g[o * widths[pi] + i] += gy[o * row + offset + i];
              }
            }
          }
          offset += widths[pi];
        }
      });
}

template <typename T>
Var<T> Slice(Var<T> a, int axis, int start, int length) {
  const auto& av = a.value();
  axis = NormalizeAxis(axis, av.rank(), "slice");
  if (start < 0 || length < 1 || start + length > av.shape[axis]) {
    throw ValidationError("slice: range [" + std::to_string(start) + ", " +
                          std::to_string(start + length) + ") outside " +
                          ShapeString(av.shape));
  }
  const auto [outer, inner] = OuterInner(av.shape, axis);
  const size_t in_row = static_cast<size_t>(av.shape[axis]) * inner;
  const size_t out_row = static_cast<size_t>(length) * inner;
  const size_t skip = static_cast<size_t>(start) * inner;
  Shape out_shape = av.shape;
  out_shape[axis] = length;
  BasicTensor<T> out(out_shape);
  for (size_t o = 0; o < outer; ++o) {
    std::copy_n(&av.data[o * in_row + skip], out_row, &out.data[o * out_row]);
  }
  const int ia = a.id;
  return a.tape->Record("slice", std::move(out), {ia},
                        [=](Tape<T>& t, int self) {
                          const auto& gy = t.grad(self).data;
                          auto& ga = t.MutableGrad(ia).data;
                          for (size_t o = 0; o < outer; ++o) {
                            for (size_t i = 0; i < out_row; ++i) {
                              ga[o * in_row + skip + i] += gy[o * out_row + i];
                            }
                          }
                        });
}

template <typename T>
BasicTensor<T> SoftmaxRows(const BasicTensor<T>& logits, T temperature) {
  BasicTensor<T> out(logits.shape);
  const size_t c = static_cast<size_t>(logits.dim(-1));
  const size_t rows = logits.numel() / c;
  for (size_t r = 0; r < rows; ++r) {
    const T* x = &logits.data[r * c];
    T* y = &out.data[r * c];
    T mx = x[0];
    for (size_t i = 1; i < c; ++i) mx = std::max(mx, x[i]);
    T sum = T(0);
    for (size_t i = 0; i < c; ++i) {
      y[i] = std::exp((x[i] - mx) / temperature);
      sum += y[i];
    }
    for (size_t i = 0; i < c; ++i) y[i] /= sum;
  }
  return out;
}

template <typename T>
Var<T> Softmax(Var<T> a) {
  BasicTensor<T> out = SoftmaxRows(a.value(), T(1));
  const size_t c = static_cast<size_t>(out.dim(-1));
  const int ia = a.id;
  return a.tape->Record("softmax", std::move(out), {ia}, [ia, c](Tape<T>& t, int self) {
    const auto& gy = t.grad(self).data;
    const auto& y = t.value(self).data;
    auto& ga = t.MutableGrad(ia).data;
    for (size_t r = 0; r < y.size() / c; ++r) {
      T dot = T(0);
      for (size_t i = 0; i < c; ++i) dot += gy[r * c + i] * y[r * c + i];
      for (size_t i = 0; i < c; ++i) {
        ga[r * c + i] += y[r * c + i] * (gy[r * c + i] - dot);
      }
    }
  });
}

template <typename T>
Var<T> LogSoftmax(Var<T> a) {
  const auto& av = a.value();
  BasicTensor<T> out(av.shape);
  const size_t c = static_cast<size_t>(av.dim(-1));
  const size_t rows = av.numel() / c;
  for (size_t r = 0; r < rows; ++r) {
    const T* x = &av.data[r * c];
    T mx = x[0];
    for (size_t i = 1; i < c; ++i) mx = std::max(mx, x[i]);
    T sum = T(0);
    for (size_t i = 0; i < c; ++i) sum += std::exp(x[i] - mx);
    const T lse = mx + std::log(sum);
    for (size_t i = 0; i < c; ++i) out.data[r * c + i] = x[i] - lse;
  }
  const int ia = a.id;
  return a.tape->Record("log_softmax", std::move(out), {ia}, [ia, c](Tape<T>& t, int self) {
    const auto& gy = t.grad(self).data;
    const auto& y = t.value(self).data;
    auto& ga = t.MutableGrad(ia).data;
    for (size_t r = 0; r < y.size() / c; ++r) {
      T total = T(0);
      for (size_t i = 0; i < c; ++i) total += gy[r * c + i];
      for (size_t i = 0; i < c; ++i) {
        ga[r * c + i] += gy[r * c + i] - std::exp(y[r * c + i]) * total;
      }
    }
  });
}

template <typename T>
Var<T> LayerNorm(Var<T> x, Var<T> gamma, Var<T> beta, T eps) {
  RequireSameTape(x, gamma, "layer_norm");
  RequireSameTape(x, beta, "layer_norm");
  const auto& xv = x.value();
  const size_t d = static_cast<size_t>(xv.dim(-1));
  if (gamma.value().numel() != d || beta.value().numel() != d) {
    ShapeError("layer_norm", xv.shape, gamma.shape());
  }
  const size_t rows = xv.numel() / d;
  BasicTensor<T> out(xv.shape);
  std::vector<T> xhat(xv.numel());
  std::vector<T> inv_std(rows);
  const auto& g = gamma.value().data;
  const auto& b = beta.value().data;
  for (size_t r = 0; r < rows; ++r) {
    const T* xr = &xv.data[r * d];
    T mean = T(0);
    for (size_t i = 0; i < d; ++i) mean += xr[i];
    mean /= static_cast<T>(d);
    T var = T(0);
    for (size_t i = 0; i < d; ++i) var += (xr[i] - mean) * (xr[i] - mean);
    var /= static_cast<T>(d);
    const T inv = T(1) / std::sqrt(var + eps);
    inv_std[r] = inv;
    for (size_t i = 0; i < d; ++i) {
      const T h = (xr[i] - mean) * inv;
      xhat[r * d + i] = h;
      out.data[r * d + i] = h * g[i] + b[i];
    }
  }
  const int ix = x.id;
  const int ig = gamma.id;
  const int ib = beta.id;
  return x.tape->Record(
      "layer_norm", std::move(out), {ix, ig, ib},
      [ix, ig, ib, d, rows, xhat = std::move(xhat), inv_std = std::move(inv_std)](
          Tape<T>& t, int self) {
        const auto& gy = t.grad(self).data;
        const auto& g = t.value(ig).data;
        if (t.requires_grad(ig) || t.requires_grad(ib)) {
          auto* gg = t.requires_grad(ig) ? &t.MutableGrad(ig).data : nullptr;
          auto* gb = t.requires_grad(ib) ? &t.MutableGrad(ib).data : nullptr;
          for (size_t r = 0; r < rows; ++r) {
            for (size_t i = 0; i < d; ++i) {
              if (gg) (*gg)[i] += gy[r * d + i] * xhat[r * d + i];
              if (gb) (*gb)[i] += gy[r * d + i];
            }
          }
        }
        if (t.requires_grad(ix)) {
          auto& gx = t.MutableGrad(ix).data;
          const T inv_d = T(1) / static_cast<T>(d);
          for (size_t r = 0; r < rows; ++r) {
            T mean_gh = T(0);
            T mean_gh_h = T(0);
            for (size_t i = 0; i < d; ++i) {
              const T gh = gy[r * d + i] * g[i];
              mean_gh += gh;
              mean_gh_h += gh * xhat[r * d + i];
            }
            mean_gh *= inv_d;
            mean_gh_h *= inv_d;
            for (size_t i = 0; i < d; ++i) {
              const T gh = gy[r * d + i] * g[i];
              gx[r * d + i] +=
                  inv_std[r] * (gh - mean_gh - xhat[r * d + i] * mean_gh_h);
            }
          }
        }
      });
}

template <typename T>
Var<T> Gelu(Var<T> a) {
  BasicTensor<T> out = a.value();
  const T inv_sqrt2 = T(1) / std::numbers::sqrt2_v<T>;
  for (T& v : out.data) v = T(0.5) * v * (T(1) + std::erf(v * inv_sqrt2));
  const int ia = a.id;
  return a.tape->Record("gelu", std::move(out), {ia}, [ia, inv_sqrt2](Tape<T>& t, int self) {
    const auto& gy = t.grad(self).data;
    const auto& x = t.value(ia).data;
    auto& ga = t.MutableGrad(ia).data;
    const T inv_sqrt_2pi = std::numbers::inv_sqrtpi_v<T> * inv_sqrt2;
    for (size_t i = 0; i < gy.size(); ++i) {
      const T cdf = T(0.5) * (T(1) + std::erf(x[i] * inv_sqrt2));
      const T pdf = inv_sqrt_2pi * std::exp(T(-0.5) * x[i] * x[i]);
      ga[i] += gy[i] * (cdf + x[i] * pdf);
    }
  });
}

template <typename T>
Var<T> Tanh(Var<T> a) {
  BasicTensor<T> out = a.value();
  for (T& v : out.data) v = std::tanh(v);
  const int ia = a.id;
  return a.tape->Record("tanh", std::move(out), {ia}, [ia](Tape<T>& t, int self) {
    const auto& gy = t.grad(self).data;
    const auto& y = t.value(self).data;
    auto& ga = t.MutableGrad(ia).data;
    for (size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i] * (T(1) - y[i] * y[i]);
  });
}

template <typename T>
Var<T> Sum(Var<T> a) {
  T total = T(0);
  for (T v : a.value().data) total += v;
  const int ia = a.id;
  return a.tape->Record("sum", BasicTensor<T>({1}, total), {ia}, [ia](Tape<T>& t, int self) {
    const T g = t.grad(self).data[0];
    for (T& v : t.MutableGrad(ia).data) v += g;
  });
}

template <typename T>
Var<T> Mean(Var<T> a) {
  const T n = static_cast<T>(a.value().numel());
  T total = T(0);
  for (T v : a.value().data) total += v;
  const int ia = a.id;
  return a.tape->Record("mean", BasicTensor<T>({1}, total / n), {ia},
                        [ia, n](Tape<T>& t, int self) {
                          const T g = t.grad(self).data[0] / n;
                          for (T& v : t.MutableGrad(ia).data) v += g;
                        });
}

template <typename T>
Var<T> MeanAxis(Var<T> a, int axis) {
  const auto& av = a.value();
  axis = NormalizeAxis(axis, av.rank(), "mean_axis");
  const auto [outer, inner] = OuterInner(av.shape, axis);
  const size_t len = static_cast<size_t>(av.shape[axis]);
  Shape out_shape = av.shape;
  out_shape.erase(out_shape.begin() + axis);
  if (out_shape.empty()) out_shape = {1};
  BasicTensor<T> out(out_shape);
  const T inv = T(1) / static_cast<T>(len);
  for (size_t o = 0; o < outer; ++o) {
    for (size_t l = 0; l < len; ++l) {
      for (size_t i = 0; i < inner; ++i) {
        out.data[o * inner + i] += av.data[(o * len + l) * inner + i];
      }
    }
  }
  for (T& v : out.data) v *= inv;
  const int ia = a.id;
  return a.tape->Record("mean_axis", std::move(out), {ia},
                        [=](Tape<T>& t, int self) {
                          const auto& gy = t.grad(self).data;
                          auto& ga = t.MutableGrad(ia).data;
                          for (size_t o = 0; o < outer; ++o) {
                            for (size_t l = 0; l < len; ++l) {
                              for (size_t i = 0; i < inner; ++i) {
                                ga[(o * len + l) * inner + i] += gy[o * inner + i] * inv;
                              }
                            }
                          }
                        });
}

template <typename T>
Var<T> SelectColumns(Var<T> a, std::span<const int> index) {
  const auto& av = a.value();
  if (av.rank() != 2 || static_cast<size_t>(av.dim(0)) != index.size()) {
    throw ValidationError("select_columns: expected [" +
                          std::to_string(index.size()) + ", C], got " +
                          ShapeString(av.shape));
  }
  const size_t c = static_cast<size_t>(av.dim(1));
  std::vector<int> idx(index.begin(), index.end());
  BasicTensor<T> out({static_cast<int>(idx.size())});
  for (size_t n = 0; n < idx.size(); ++n) {
    if (idx[n] < 0 || static_cast<size_t>(idx[n]) >= c) {
      throw ValidationError("select_columns: index " + std::to_string(idx[n]) +
                            " outside [0, " + std::to_string(c) + ")");
    }
    out.data[n] = av.data[n * c + idx[n]];
  }
  const int ia = a.id;
  return a.tape->Record("select_columns", std::move(out), {ia},
                        [ia, c, idx = std::move(idx)](Tape<T>& t, int self) {
                          const auto& gy = t.grad(self).data;
                          auto& ga = t.MutableGrad(ia).data;
                          for (size_t n = 0; n < idx.size(); ++n) {
                            ga[n * c + idx[n]] += gy[n];
                          }
                        });
}

template <typename T>
Var<T> CrossEntropy(Var<T> logits, std::span<const int> labels) {
  return Scale(Mean(SelectColumns(LogSoftmax(logits), labels)), T(-1));
}

#define FROSTMIL_INSTANTIATE_OPS(T)                                          \
  template Var<T> Add(Var<T>, Var<T>);                                       \
  template Var<T> Sub(Var<T>, Var<T>);                                       \
  template Var<T> Mul(Var<T>, Var<T>);                                       \
  template Var<T> Scale(Var<T>, T);                                          \
  template Var<T> Linear(Var<T>, Var<T>, Var<T>);                            \
  template Var<T> BatchMatMul(Var<T>, Var<T>, bool);                         \
  template Var<T> Reshape(Var<T>, Shape);                                    \
  template Var<T> Permute(Var<T>, std::vector<int>);                         \
  template Var<T> Concat(const std::vector<Var<T>>&, int);                   \
  template Var<T> Slice(Var<T>, int, int, int);                              \
  template Var<T> Softmax(Var<T>);                                           \
  template Var<T> LogSoftmax(Var<T>);                                        \
  template Var<T> LayerNorm(Var<T>, Var<T>, Var<T>, T);                      \
  template Var<T> Gelu(Var<T>);                                              \
  template Var<T> Tanh(Var<T>);                                              \
  template Var<T> Sum(Var<T>);                                               \
  template Var<T> Mean(Var<T>);                                              \
  template Var<T> MeanAxis(Var<T>, int);                                     \
  template Var<T> SelectColumns(Var<T>, std::span<const int>);               \
  template Var<T> CrossEntropy(Var<T>, std::span<const int>);                \
  template BasicTensor<T> SoftmaxRows(const BasicTensor<T>&, T);

FROSTMIL_INSTANTIATE_OPS(float)
FROSTMIL_INSTANTIATE_OPS(double)

#undef FROSTMIL_INSTANTIATE_OPS

}  // namespace frostmil::nn
