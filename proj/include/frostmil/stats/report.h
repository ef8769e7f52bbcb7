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

#ifndef FROSTMIL_STATS_REPORT_H_
#define FROSTMIL_STATS_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "frostmil/common/json_io.h"
#include "frostmil/stats/wilcoxon.h"

namespace frostmil::stats {

struct ScoredItem {
  std::string id;
  int label = 0;
  std::vector<double> scores;  // length C
  std::map<std::string, std::string> tags;
};

struct EvalOptions {
  int classes = 2;
  int positive_class = 1;
  int bootstrap_iters = 1000;
  double level = 0.95;
  uint64_t seed = 0;
};

struct MetricValue {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct EvalReport {
  std::string task;
  std::string model;
  size_t n_items = 0;
  uint64_t seed = 0;
  std::map<std::string, MetricValue> metrics;
  std::map<std::string, double> thresholds;
  std::vector<PairwiseComparison> comparisons;
  std::vector<std::string> warnings;
};

/// Metric names reported for binary tasks, in table order.
const std::vector<std::string>& BinaryMetricNames();
/// Metric names reported for multi-class tasks, in table order.
const std::vector<std::string>& MulticlassMetricNames();

/// Point estimates and bootstrap CIs. Throws UndefinedMetricError naming the
/// metric when it cannot be computed on the full set.
EvalReport Evaluate(const std::vector<ScoredItem>& items, const EvalOptions& options);

struct SubgroupResult {
  std::string group;
  bool skipped = false;
  std::string reason;
  EvalReport report;
};

/// One report per value of `key`; groups whose metrics are undefined are
/// marked skipped.
std::vector<SubgroupResult> SubgroupReport(const std::vector<ScoredItem>& items,
                                           const std::string& key, const EvalOptions& options);

Json ToJson(const EvalReport& report);
Json ToJson(const std::vector<SubgroupResult>& groups);

/// Markdown table: AUROC, Spe@90, Spe@95, Accuracy, F1 (binary) or the
/// multi-class columns, with 95% CIs.
std::string RenderMarkdown(const EvalReport& report,
                           const std::vector<SubgroupResult>& groups = {});

}  // namespace frostmil::stats

#endif  // FROSTMIL_STATS_REPORT_H_
