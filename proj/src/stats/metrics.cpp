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

#include "frostmil/stats/metrics.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace frostmil::stats {

namespace {

void CheckSizes(size_t a, size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": " + std::to_string(a) + " scores but " +
                          std::to_string(b) + " labels");
  }
}

std::pair<size_t, size_t> CountClasses(std::span<const int> positive) {
  const size_t pos = static_cast<size_t>(
      std::count_if(positive.begin(), positive.end(), [](int y) { return y != 0; }));
  return {pos, positive.size() - pos};
}

}  // namespace

std::vector<double> ScoreMatrix::Column(int k) const {
  std::vector<double> out(rows());
  for (size_t i = 0; i < out.size(); ++i) out[i] = at(i, k);
  return out;
}

double Auroc(std::span<const double> scores, std::span<const int> positive) {
  CheckSizes(scores.size(), positive.size(), "auroc");
  const auto [n_pos, n_neg] = CountClasses(positive);
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedMetricError("AUROC undefined: need both classes (positives " +
                               std::to_string(n_pos) + ", negatives " + std::to_string(n_neg) +
                               ")");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Twice the positive rank sum stays integral with midranks.
  double twice_rank_sum = 0.0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double twice_mid = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (size_t k = i; k < j; ++k) {
      if (positive[order[k]] != 0) twice_rank_sum += twice_mid;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double u = (twice_rank_sum - np * (np + 1.0)) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

OperatingPoint SpecAtSens(std::span<const double> scores, std::span<const int> positive,
                          double target_sens) {
  CheckSizes(scores.size(), positive.size(), "spec_at_sens");
  const auto [n_pos, n_neg] = CountClasses(positive);
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedMetricError("spec_at_sens undefined: need both classes");
  }
  std::vector<double> thresholds(scores.begin(), scores.end());
  thresholds.push_back(-std::numeric_limits<double>::infinity());
  thresholds.push_back(std::numeric_limits<double>::infinity());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<double> pos_scores;
  std::vector<double> neg_scores;
  for (size_t i = 0; i < scores.size(); ++i) {
    (positive[i] != 0 ? pos_scores : neg_scores).push_back(scores[i]);
  }
  std::sort(pos_scores.begin(), pos_scores.end());
  std::sort(neg_scores.begin(), neg_scores.end());

  OperatingPoint best{-1.0, 0.0, 0.0};
  for (double t : thresholds) {
    const size_t pos_below = static_cast<size_t>(
        std::lower_bound(pos_scores.begin(), pos_scores.end(), t) - pos_scores.begin());
    const size_t neg_below = static_cast<size_t>(
        std::lower_bound(neg_scores.begin(), neg_scores.end(), t) - neg_scores.begin());
    const double sens = static_cast<double>(n_pos - pos_below) / static_cast<double>(n_pos);
    if (sens < target_sens) continue;
    const double spec = static_cast<double>(neg_below) / static_cast<double>(n_neg);
    // Thresholds ascend, so >= keeps the largest threshold among ties.
    if (spec >= best.specificity) best = {spec, sens, t};
  }
  if (best.specificity < 0) {
    throw UndefinedMetricError("spec_at_sens: no threshold reaches sensitivity " +
                               std::to_string(target_sens));
  }
  return best;
}

double MacroAuc(const ScoreMatrix& scores, std::span<const int> labels,
                std::vector<std::string>* warnings) {
  CheckSizes(scores.rows(), labels.size(), "macro_auc");
  std::vector<size_t> counts(static_cast<size_t>(scores.classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= scores.classes) throw ValidationError("macro_auc: label out of range");
    ++counts[static_cast<size_t>(y)];
  }
  const auto present = std::count_if(counts.begin(), counts.end(), [](size_t c) { return c > 0; });
  if (present < 2) throw UndefinedMetricError("macro AUC undefined: fewer than 2 classes present");
  double total = 0.0;
  int used = 0;
  for (int k = 0; k < scores.classes; ++k) {
    if (counts[static_cast<size_t>(k)] == 0) {
      if (warnings) warnings->push_back("macro_auc: class " + std::to_string(k) + " absent, skipped");
      continue;
    }
    std::vector<int> pos(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) pos[i] = labels[i] == k;
    total += Auroc(scores.Column(k), pos);
    ++used;
  }
  return total / used;
}

double TopKAccuracy(const ScoreMatrix& scores, std::span<const int> labels, int k) {
  CheckSizes(scores.rows(), labels.size(), "topk_accuracy");
  if (k < 1 || k > scores.classes) throw ValidationError("topk_accuracy: k must be in [1, C]");
  if (labels.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    const double s = scores.at(i, y);
    int rank = 0;
    for (int c = 0; c < scores.classes; ++c) {
      const double v = scores.at(i, c);
      if (v > s || (v == s && c < y)) ++rank;
    }
    if (rank < k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

std::vector<int> Argmax(const ScoreMatrix& scores) {
  std::vector<int> out(scores.rows());
  for (size_t i = 0; i < out.size(); ++i) {
    int best = 0;
    for (int c = 1; c < scores.classes; ++c) {
      if (scores.at(i, c) > scores.at(i, best)) best = c;
    }
    out[i] = best;
  }
  return out;
}

double Accuracy(std::span<const int> preds, std::span<const int> labels) {
  CheckSizes(preds.size(), labels.size(), "accuracy");
  if (labels.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < labels.size(); ++i) hits += preds[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

namespace {

double ClassF1(std::span<const int> preds, std::span<const int> labels, int cls) {
  size_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool p = preds[i] == cls;
    const bool y = labels[i] == cls;
    tp += p && y;
    fp += p && !y;
    fn += !p && y;
  }
  if (tp == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace

double F1(std::span<const int> preds, std::span<const int> labels, int positive_class) {
  CheckSizes(preds.size(), labels.size(), "f1");
  return ClassF1(preds, labels, positive_class);
}

double BalancedAccuracy(std::span<const int> preds, std::span<const int> labels, int classes) {
  CheckSizes(preds.size(), labels.size(), "balanced_accuracy");
  double total = 0.0;
  int present = 0;
  for (int c = 0; c < classes; ++c) {
    size_t support = 0, hits = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != c) continue;
      ++support;
      hits += preds[i] == c;
    }
    if (support == 0) continue;
    total += static_cast<double>(hits) / static_cast<double>(support);
    ++present;
  }
  return present ? total / present : 0.0;
}

double WeightedF1(std::span<const int> preds, std::span<const int> labels, int classes) {
  CheckSizes(preds.size(), labels.size(), "weighted_f1");
  if (labels.empty()) return 0.0;
  double total = 0.0;
  for (int c = 0; c < classes; ++c) {
    const auto support = std::count(labels.begin(), labels.end(), c);
    if (support) total += static_cast<double>(support) * ClassF1(preds, labels, c);
  }
  return total / static_cast<double>(labels.size());
}

}  // namespace frostmil::stats
