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

#ifndef FROSTMIL_TESTS_STATS_ORACLES_H_
#define FROSTMIL_TESTS_STATS_ORACLES_H_

// Reference implementations written independently of src/stats, used to
// cross-check the production code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace frostmil::testing {

/// AUROC by counting every positive/negative pair.
inline double PairCountAuroc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0;
  double pairs = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      pairs += 1;
      if (scores[i] > scores[j]) wins += 1;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct ScanResult {
  double specificity = -1;
  double threshold = 0;
};

/// Tries every candidate threshold and counts predictions item by item.
inline ScanResult ThresholdScan(const std::vector<double>& scores, const std::vector<int>& labels,
                                double target) {
  std::vector<double> candidates = scores;
  candidates.push_back(-std::numeric_limits<double>::infinity());
  candidates.push_back(std::numeric_limits<double>::infinity());
  ScanResult best;
  for (double t : candidates) {
    int tp = 0, pos = 0, tn = 0, neg = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      const bool call = scores[i] >= t;
      if (labels[i]) {
        ++pos;
        tp += call;
      } else {
        ++neg;
        tn += !call;
      }
    }
    if (static_cast<double>(tp) / pos < target) continue;
    const double spec = static_cast<double>(tn) / neg;
    if (spec > best.specificity || (spec == best.specificity && t > best.threshold)) {
      best = {spec, t};
    }
  }
  return best;
}

/// Holm step-down by repeated selection of the smallest remaining p.
inline std::vector<double> HandHolm(const std::vector<double>& raw) {
  const size_t m = raw.size();
  std::vector<double> out(m);
  std::vector<bool> used(m, false);
  double running = 0;
  for (size_t step = 0; step < m; ++step) {
    size_t pick = m;
    for (size_t i = 0; i < m; ++i) {
      if (!used[i] && (pick == m || raw[i] < raw[pick])) pick = i;
    }
    used[pick] = true;
    running = std::max(running, std::min(1.0, static_cast<double>(m - step) * raw[pick]));
    out[pick] = running;
  }
  return out;
}

/// Two-sided exact signed-rank p by enumerating all 2^n sign patterns.
inline double EnumeratedSignedRankP(const std::vector<double>& ranks, double w_plus) {
  const size_t n = ranks.size();
  const uint64_t total = uint64_t{1} << n;
  uint64_t lower = 0, upper = 0;
  for (uint64_t mask = 0; mask < total; ++mask) {
    double w = 0;
    for (size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) w += ranks[i];
    }
    if (w <= w_plus + 1e-9) ++lower;
    if (w >= w_plus - 1e-9) ++upper;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) /
                           static_cast<double>(total));
}

/// Midranks of |d| and the positive-rank sum, computed by direct counting.
inline std::pair<std::vector<double>, double> SignedRanks(const std::vector<double>& d) {
  std::vector<double> ranks(d.size());
  double w_plus = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    double less = 0, equal = 0;
    for (double e : d) {
      less += std::fabs(e) < std::fabs(d[i]);
      equal += std::fabs(e) == std::fabs(d[i]);
    }
    ranks[i] = less + (equal + 1) / 2;
    if (d[i] > 0) w_plus += ranks[i];
  }
  return {ranks, w_plus};
}

namespace oracle_detail {

inline uint64_t Mix(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace oracle_detail

/// Second bootstrap resampler following the documented stream layout:
/// Derive(seed, {iter, attempt}) feeding mt19937_64, multiply-high index draw,
/// type-7 percentiles, interval widened to contain the point.
struct OracleInterval {
  double point, lo, hi;
};

inline OracleInterval OracleBootstrap(size_t n, const std::function<bool(const std::vector<size_t>&, double*)>& metric,
                                      int iters, double level, uint64_t seed) {
  using oracle_detail::Mix;
  std::vector<size_t> all(n);
  for (size_t i = 0; i < n; ++i) all[i] = i;
  OracleInterval out{};
  metric(all, &out.point);
  std::vector<double> values;
  for (int it = 0; it < iters; ++it) {
    for (uint64_t attempt = 0;; ++attempt) {
      uint64_t state = Mix(seed);
      state = Mix(state ^ Mix(static_cast<uint64_t>(it) + 0x632BE59BD9B4E019ULL));
      state = Mix(state ^ Mix(attempt + 0x632BE59BD9B4E019ULL));
      std::mt19937_64 engine(state);
      std::vector<size_t> idx(n);
      for (auto& i : idx) {
        i = static_cast<size_t>((static_cast<unsigned __int128>(engine()) * n) >> 64);
      }
      double v;
      if (metric(idx, &v)) {
        values.push_back(v);
        break;
      }
    }
  }
  std::sort(values.begin(), values.end());
  auto pct = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const double base = std::floor(pos);
    const size_t k = static_cast<size_t>(base);
    const double next = k + 1 < values.size() ? values[k + 1] : values[k];
    return values[k] + (pos - base) * (next - values[k]);
  };
  const double alpha = (1 - level) / 2;
  out.lo = std::min(pct(alpha), out.point);
  out.hi = std::max(pct(1 - alpha), out.point);
  return out;
}

}  // namespace frostmil::testing

#endif  // FROSTMIL_TESTS_STATS_ORACLES_H_
