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

#ifndef FROSTMIL_STATS_METRICS_H_
#define FROSTMIL_STATS_METRICS_H_

#include <span>
#include <string>
#include <vector>

#include "frostmil/common/error.h"

namespace frostmil::stats {

/// Raised when a metric's preconditions fail on the given data (for example
/// a single-class sample). Bootstrap resampling redraws on this error.
class UndefinedMetricError : public ValidationError {
 public:
  explicit UndefinedMetricError(const std::string& message)
      : ValidationError(message) {}
};

/// Row-major n x C score matrix.
struct ScoreMatrix {
  int classes = 0;
  std::vector<double> values;

  size_t rows() const { return classes ? values.size() / classes : 0; }
  double at(size_t i, int k) const { return values[i * classes + k]; }
  std::vector<double> Column(int k) const;
};

/// Mann-Whitney AUROC with midrank ties; nonzero `positive` entries mark
/// the positive class.
double Auroc(std::span<const double> scores, std::span<const int> positive);

struct OperatingPoint {
  double specificity = 0.0;
  double sensitivity = 0.0;
  double threshold = 0.0;  // predict positive iff score >= threshold
};

/// Maximum specificity over thresholds in (observed scores, -inf, +inf)
/// whose sensitivity reaches the target; ties resolved to the largest
/// threshold.
OperatingPoint SpecAtSens(std::span<const double> scores,
                          std::span<const int> positive, double target_sens);

/// Mean one-vs-rest AUROC over classes present in `labels`. Skipped classes
/// are appended to `warnings` when given.
double MacroAuc(const ScoreMatrix& scores, std::span<const int> labels,
                std::vector<std::string>* warnings = nullptr);

/// Ties rank the lower class index first.
double TopKAccuracy(const ScoreMatrix& scores, std::span<const int> labels,
                    int k);

/// First maximal class per row.
std::vector<int> Argmax(const ScoreMatrix& scores);

double Accuracy(std::span<const int> preds, std::span<const int> labels);
double F1(std::span<const int> preds, std::span<const int> labels,
          int positive_class);
double BalancedAccuracy(std::span<const int> preds, std::span<const int> labels,
                        int classes);
double WeightedF1(std::span<const int> preds, std::span<const int> labels,
                  int classes);

}  // namespace frostmil::stats

#endif  // FROSTMIL_STATS_METRICS_H_
