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

#ifndef FROSTMIL_TRIAGE_TRIAGE_H_
#define FROSTMIL_TRIAGE_TRIAGE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frostmil/common/json_io.h"

namespace frostmil::triage {

/// Auto-handle iff score > theta_hi or score < theta_lo.
struct TriagePolicy {
  double theta_hi = 0.9956;
  double theta_lo = 0.0044;

  void Validate() const;
  bool IsAuto(double score) const { return score > theta_hi || score < theta_lo; }
};

struct ScoredCase {
  std::string case_id;
  double score = 0.0;  // positive-class probability
  bool positive = false;  // reference label
  std::optional<bool> pathologist_positive;
};

struct TriageOutcome {
  std::vector<std::string> auto_set;
  std::vector<std::string> residual_set;
  size_t n_cases = 0;
  double workload_reduction = 0.0;
  /// Positives scored above theta_hi over all positives.
  double positive_capture = 0.0;
};

TriageOutcome ApplyPolicy(const TriagePolicy& policy, std::span<const ScoredCase> cases);

struct Confusion {
  size_t tp = 0;
  size_t fn = 0;
  size_t tn = 0;
  size_t fp = 0;

  /// NaN when the class is absent.
  double sensitivity() const;
  double specificity() const;
};

struct WorkflowComparison {
  Confusion before;  // pathologist on every case
  Confusion after;   // model on auto cases, pathologist on the rest
  double p_sensitivity = 1.0;
  double p_specificity = 1.0;
};

/// Two-sided mid-p McNemar test from the discordant pair counts.
double MidPMcNemar(size_t b, size_t c);

WorkflowComparison CombinedWorkflowEval(const TriagePolicy& policy,
                                        std::span<const ScoredCase> cases);

struct IhcScreenResult {
  double identified_negative_fraction = 0.0;
  double threshold = 0.0;
  Confusion confusion;  // predicted positive iff score >= threshold
};

/// Threshold from spec_at_sens on the needs-IHC subgroup.
IhcScreenResult IhcScreen(std::span<const ScoredCase> cases, double target_sens = 0.95);

/// Extension: widest policy that makes no auto-set error on `cases`.
TriagePolicy SearchZeroErrorPolicy(std::span<const ScoredCase> cases);

Json ToJson(const TriagePolicy& policy);
Json ToJson(const TriageOutcome& outcome);
Json ToJson(const WorkflowComparison& comparison);
Json ToJson(const IhcScreenResult& result);

/// Scores sorted descending with the auto/residual tag of each case.
void WriteWaterfall(const std::filesystem::path& path, const TriagePolicy& policy,
                    std::span<const ScoredCase> cases);

}  // namespace frostmil::triage

#endif  // FROSTMIL_TRIAGE_TRIAGE_H_
