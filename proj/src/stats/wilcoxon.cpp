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

#include "frostmil/stats/wilcoxon.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "frostmil/common/error.h"

namespace frostmil::stats {

double ExactSignedRankP(std::span<const double> ranks, double w_plus) {
  // Work with doubled ranks so midranks stay integral.
  std::vector<int> twice(ranks.size());
  int total = 0;
  for (size_t i = 0; i < ranks.size(); ++i) {
    twice[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
    total += twice[i];
  }
  std::vector<uint64_t> count(static_cast<size_t>(total) + 1, 0);
  count[0] = 1;
  int reach = 0;
  for (int r : twice) {
    for (int s = reach; s >= 0; --s) {
      if (count[static_cast<size_t>(s)]) count[static_cast<size_t>(s + r)] += count[static_cast<size_t>(s)];
    }
    reach += r;
  }
  const int w = static_cast<int>(std::lround(2.0 * w_plus));
  uint64_t lower = 0, upper = 0;
  for (int s = 0; s <= total; ++s) {
    if (s <= w) lower += count[static_cast<size_t>(s)];
    if (s >= w) upper += count[static_cast<size_t>(s)];
  }
  const double denom = std::ldexp(1.0, static_cast<int>(ranks.size()));
  const double p = 2.0 * static_cast<double>(std::min(lower, upper)) / denom;
  return std::min(1.0, p);
}

WilcoxonResult WilcoxonSignedRank(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("wilcoxon: samples differ in length");
  if (static_cast<int>(x.size()) < kWilcoxonMinPairs) {
    throw ValidationError("wilcoxon: need at least " + std::to_string(kWilcoxonMinPairs) +
                          " paired observations, got " + std::to_string(x.size()));
  }
  std::vector<double> diffs;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  WilcoxonResult out;
  out.n_nonzero = static_cast<int>(diffs.size());
  if (diffs.empty()) return out;

  std::vector<size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return std::fabs(diffs[a]) < std::fabs(diffs[b]); });
  std::vector<double> ranks(diffs.size());
  double tie_term = 0.0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && std::fabs(diffs[order[j]]) == std::fabs(diffs[order[i]])) ++j;
    const double mid = static_cast<double>(i + 1 + j) / 2.0;
    for (size_t k = i; k < j; ++k) ranks[order[k]] = mid;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  for (size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0) out.w_plus += ranks[i];
  }
  const int n = out.n_nonzero;
  if (n <= kWilcoxonExactMax) {
    out.p_value = ExactSignedRankP(ranks, out.w_plus);
    return out;
  }
  out.exact = false;
  const double nn = n;
  const double mean = nn * (nn + 1) / 4.0;
  const double var = nn * (nn + 1) * (2 * nn + 1) / 24.0 - tie_term / 48.0;
  if (var <= 0) return out;
  const double z = (out.w_plus - mean) / std::sqrt(var);
  out.p_value = std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
  return out;
}

std::vector<double> HolmAdjust(std::span<const double> raw) {
  const size_t m = raw.size();
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return raw[a] < raw[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (size_t j = 0; j < m; ++j) {
    const double scaled = std::min(1.0, static_cast<double>(m - j) * raw[order[j]]);
    running = std::max(running, scaled);
    adjusted[order[j]] = running;
  }
  return adjusted;
}

std::vector<PairwiseComparison> PairedWilcoxonHolm(const std::vector<std::string>& models,
                                                   const std::vector<std::vector<double>>& table) {
  if (models.size() != table.size()) {
    throw ValidationError("paired_wilcoxon_holm: " + std::to_string(models.size()) +
                          " model names for " + std::to_string(table.size()) + " table rows");
  }
  std::vector<PairwiseComparison> out;
  std::vector<double> raw;
  for (size_t a = 0; a < models.size(); ++a) {
    for (size_t b = a + 1; b < models.size(); ++b) {
      const WilcoxonResult r = WilcoxonSignedRank(table[a], table[b]);
      out.push_back({models[a], models[b], r.p_value, r.p_value, static_cast<int>(table[a].size())});
      raw.push_back(r.p_value);
    }
  }
  const std::vector<double> adj = HolmAdjust(raw);
  for (size_t i = 0; i < out.size(); ++i) out[i].adjusted_p = adj[i];
  return out;
}

}  // namespace frostmil::stats
