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

#ifndef FROSTMIL_STATS_WILCOXON_H_
#define FROSTMIL_STATS_WILCOXON_H_

#include <span>
#include <string>
#include <vector>

namespace frostmil::stats {

struct WilcoxonResult {
  double w_plus = 0.0;  // sum of ranks of positive differences
  double p_value = 1.0;
  int n_nonzero = 0;
  bool exact = true;
};

/// Largest nonzero-difference count that uses the exact null distribution.
inline constexpr int kWilcoxonExactMax = 25;
/// Fewest paired observations accepted.
inline constexpr int kWilcoxonMinPairs = 6;

/// Two-sided paired signed-rank test on x - y. Zero differences are dropped
/// and tied magnitudes get average ranks.
WilcoxonResult WilcoxonSignedRank(std::span<const double> x, std::span<const double> y);

/// Two-sided exact p for W+ given the (possibly tied) ranks.
double ExactSignedRankP(std::span<const double> ranks, double w_plus);

/// Holm step-down adjustment, returned in input order.
std::vector<double> HolmAdjust(std::span<const double> raw);

struct PairwiseComparison {
  std::string model_a;
  std::string model_b;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  int n_pairs = 0;
};

/// All model pairs over a models x tasks metric table, Holm-adjusted
/// together.
std::vector<PairwiseComparison> PairedWilcoxonHolm(
    const std::vector<std::string>& models,
    const std::vector<std::vector<double>>& table);

}  // namespace frostmil::stats

#endif  // FROSTMIL_STATS_WILCOXON_H_
