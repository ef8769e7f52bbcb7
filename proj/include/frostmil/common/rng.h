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

#ifndef FROSTMIL_COMMON_RNG_H_
#define FROSTMIL_COMMON_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace frostmil {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
uint64_t SplitMix64(uint64_t x);

/// Seeded random source with platform-independent output.
///
/// The bit stream comes from std::mt19937_64, whose sequence is fixed by the
/// standard. All conversions to doubles, bounded integers and normals are
/// done here rather than through <random> distributions, whose algorithms
/// are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  /// Stream for (seed, keys...). Distinct key tuples give unrelated streams.
  static Rng Derive(uint64_t seed, std::initializer_list<uint64_t> keys);
  static uint64_t DeriveSeed(uint64_t seed,
                             std::initializer_list<uint64_t> keys);

  uint64_t NextU64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  /// Uniform integer in [0, n). Multiply-high mapping, n >= 1.
  uint64_t Below(uint64_t n);

  /// Standard normal via Box-Muller (one value per call, no caching).
  double Normal();

  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(values[i - 1], values[j]);
    }
  }
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    Shuffle(std::span<T>(values));
  }

  /// Sorted sample of k distinct indices from [0, n), k <= n.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
};

/// Stable 64-bit FNV-1a hash of a string, for deriving per-name streams.
uint64_t HashString(std::string_view text);

}  // namespace frostmil

#endif  // FROSTMIL_COMMON_RNG_H_
