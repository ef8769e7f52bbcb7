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

#ifndef FROSTMIL_STATS_BOOTSTRAP_H_
#define FROSTMIL_STATS_BOOTSTRAP_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace frostmil::stats {

/// Metric evaluated on a resample given as item indices. Throws
/// UndefinedMetricError when the resample is degenerate.
using IndexedMetric = std::function<double(std::span<const size_t>)>;

struct Interval {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int attempts = 0;  // resamples drawn, including redraws
};

/// Resample index i of iteration `iter`, attempt `attempt`: Below(n) draws
/// from Rng::Derive(seed, {iter, attempt}).
std::vector<size_t> BootstrapSample(size_t n, uint64_t seed, uint64_t iter,
                                    uint64_t attempt);

/// Linear-interpolation percentile (the common "type 7" definition) of a
/// sorted sample, q in [0, 1].
double Quantile(std::span<const double> sorted, double q);

/// Item-level percentile bootstrap. Undefined resamples are redrawn, with at
/// most 10 * iters draws in total; more than 90% undefined is an error. The
/// interval is widened if needed so that it contains the point estimate.
Interval BootstrapCi(size_t n_items, const IndexedMetric& metric, int iters = 1000,
                     double level = 0.95, uint64_t seed = 0);

}  // namespace frostmil::stats

#endif  // FROSTMIL_STATS_BOOTSTRAP_H_
