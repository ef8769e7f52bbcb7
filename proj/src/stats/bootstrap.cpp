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

#include "frostmil/stats/bootstrap.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frostmil/common/rng.h"
#include "frostmil/stats/metrics.h"

namespace frostmil::stats {

std::vector<size_t> BootstrapSample(size_t n, uint64_t seed, uint64_t iter, uint64_t attempt) {
  Rng rng = Rng::Derive(seed, {iter, attempt});
  std::vector<size_t> idx(n);
  for (auto& i : idx) i = static_cast<size_t>(rng.Below(n));
  return idx;
}

double Quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ValidationError("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval BootstrapCi(size_t n_items, const IndexedMetric& metric, int iters, double level,
                     uint64_t seed) {
  if (iters < 1) throw ValidationError("bootstrap: iters must be >= 1");
  if (!(level > 0 && level < 1)) throw ValidationError("bootstrap: level must be in (0, 1)");
  if (n_items == 0) throw UndefinedMetricError("bootstrap: no items");
  std::vector<size_t> all(n_items);
  std::iota(all.begin(), all.end(), size_t{0});
  Interval out;
  out.point = metric(all);

  const int max_attempts = 10 * iters;
  std::vector<double> values;
  values.reserve(static_cast<size_t>(iters));
  int undefined = 0;
  for (int it = 0; it < iters && out.attempts < max_attempts; ++it) {
    for (uint64_t attempt = 0; out.attempts < max_attempts; ++attempt) {
      ++out.attempts;
      try {
        values.push_back(metric(BootstrapSample(n_items, seed, static_cast<uint64_t>(it), attempt)));
        break;
      } catch (const UndefinedMetricError&) {
        ++undefined;
      }
    }
  }
  if (static_cast<int>(values.size()) < iters || undefined * 10 > out.attempts * 9) {
    throw UndefinedMetricError("bootstrap: metric undefined on " + std::to_string(undefined) +
                               " of " + std::to_string(out.attempts) + " resamples");
  }
  std::sort(values.begin(), values.end());
  const double alpha = (1.0 - level) / 2.0;
  out.lo = std::min(Quantile(values, alpha), out.point);
  out.hi = std::max(Quantile(values, 1.0 - alpha), out.point);
  return out;
}

}  // namespace frostmil::stats
