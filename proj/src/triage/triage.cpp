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

#include "frostmil/triage/triage.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "frostmil/stats/metrics.h"

namespace frostmil::triage {

namespace {

Json Number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

void Tally(Confusion& c, bool truth, bool call) {
  if (truth) {
    (call ? c.tp : c.fn) += 1;
  } else {
    (call ? c.fp : c.tn) += 1;
  }
}

}  // namespace

void TriagePolicy::Validate() const {
  if (!(theta_lo >= 0 && theta_lo < theta_hi && theta_hi <= 1)) {
    throw ValidationError("triage policy: need 0 <= theta_lo < theta_hi <= 1");
  }
}

TriageOutcome ApplyPolicy(const TriagePolicy& policy, std::span<const ScoredCase> cases) {
  policy.Validate();
  TriageOutcome out;
  out.n_cases = cases.size();
  size_t positives = 0, captured = 0;
  for (const auto& c : cases) {
    if (!(c.score >= 0 && c.score <= 1)) {
      throw ValidationError("triage: case " + c.case_id + " score outside [0, 1]");
    }
    (policy.IsAuto(c.score) ? out.auto_set : out.residual_set).push_back(c.case_id);
    if (c.positive) {
      ++positives;
      if (c.score > policy.theta_hi) ++captured;
    }
  }
  if (!cases.empty()) {
    out.workload_reduction = static_cast<double>(out.auto_set.size()) / cases.size();
  }
  if (positives) out.positive_capture = static_cast<double>(captured) / positives;
  return out;
}

double Confusion::sensitivity() const {
  return tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                 : std::numeric_limits<double>::quiet_NaN();
}

double Confusion::specificity() const {
  return tn + fp ? static_cast<double>(tn) / static_cast<double>(tn + fp)
                 : std::numeric_limits<double>::quiet_NaN();
}

double MidPMcNemar(size_t b, size_t c) {
  const size_t n = b + c;
  if (n == 0) return 1.0;
  const size_t k = std::min(b, c);
  // Binomial(n, 1/2) probabilities in log space.
  double cdf = 0.0;
  double pk = 0.0;
  for (size_t i = 0; i <= k; ++i) {
    const double logp = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) -
                        static_cast<double>(n) * std::log(2.0);
    const double p = std::exp(logp);
    cdf += p;
    if (i == k) pk = p;
  }
  return std::clamp(2.0 * (cdf - 0.5 * pk), 0.0, 1.0);
}

WorkflowComparison CombinedWorkflowEval(const TriagePolicy& policy,
                                        std::span<const ScoredCase> cases) {
  policy.Validate();
  WorkflowComparison out;
  size_t b_pos = 0, c_pos = 0, b_neg = 0, c_neg = 0;
  for (const auto& c : cases) {
    if (!c.pathologist_positive.has_value()) {
      throw ValidationError("combined_workflow_eval: case " + c.case_id +
                            " has no pathologist call");
    }
    const bool before = *c.pathologist_positive;
    const bool after = policy.IsAuto(c.score) ? c.score > policy.theta_hi : before;
    Tally(out.before, c.positive, before);
    Tally(out.after, c.positive, after);
    const bool before_ok = before == c.positive;
    const bool after_ok = after == c.positive;
    if (before_ok != after_ok) {
      if (c.positive) {
        (before_ok ? b_pos : c_pos) += 1;
      } else {
        (before_ok ? b_neg : c_neg) += 1;
      }
    }
  }
  out.p_sensitivity = MidPMcNemar(b_pos, c_pos);
  out.p_specificity = MidPMcNemar(b_neg, c_neg);
  return out;
}

IhcScreenResult IhcScreen(std::span<const ScoredCase> cases, double target_sens) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& c : cases) {
    scores.push_back(c.score);
    labels.push_back(c.positive ? 1 : 0);
  }
  const stats::OperatingPoint op = stats::SpecAtSens(scores, labels, target_sens);
  IhcScreenResult out;
  out.threshold = op.threshold;
  for (const auto& c : cases) Tally(out.confusion, c.positive, c.score >= op.threshold);
  out.identified_negative_fraction = out.confusion.specificity();
  return out;
}

TriagePolicy SearchZeroErrorPolicy(std::span<const ScoredCase> cases) {
  double max_neg = 0.0;
  double min_pos = 1.0;
  bool any_neg = false, any_pos = false;
  for (const auto& c : cases) {
    if (c.positive) {
      min_pos = any_pos ? std::min(min_pos, c.score) : c.score;
      any_pos = true;
    } else {
      max_neg = any_neg ? std::max(max_neg, c.score) : c.score;
      any_neg = true;
    }
  }
  // Above max_neg every case is positive; below min_pos every case negative.
  TriagePolicy p{any_neg ? max_neg : 0.0, any_pos ? min_pos : 1.0};
  if (p.theta_lo >= p.theta_hi) std::swap(p.theta_lo, p.theta_hi);
  if (p.theta_lo >= p.theta_hi) p = TriagePolicy{1.0, 0.0};
  return p;
}

Json ToJson(const TriagePolicy& p) { return Json{{"theta_hi", p.theta_hi}, {"theta_lo", p.theta_lo}}; }

Json ToJson(const TriageOutcome& o) {
  return Json{{"n_cases", o.n_cases},
              {"n_auto", o.auto_set.size()},
              {"n_residual", o.residual_set.size()},
              {"auto_set", o.auto_set},
              {"residual_set", o.residual_set},
              {"workload_reduction", o.workload_reduction},
              {"positive_capture", o.positive_capture}};
}

namespace {

Json ToJson(const Confusion& c) {
  return Json{{"tp", c.tp}, {"fn", c.fn}, {"tn", c.tn}, {"fp", c.fp},
              {"sensitivity", Number(c.sensitivity())},
              {"specificity", Number(c.specificity())}};
}

}  // namespace

Json ToJson(const WorkflowComparison& w) {
  return Json{{"before", ToJson(w.before)},
              {"after", ToJson(w.after)},
              {"p_sensitivity", w.p_sensitivity},
              {"p_specificity", w.p_specificity},
              {"test", "mid-p McNemar, two-sided"}};
}

Json ToJson(const IhcScreenResult& r) {
  return Json{{"identified_negative_fraction", Number(r.identified_negative_fraction)},
              {"threshold", Number(r.threshold)},
              {"confusion", ToJson(r.confusion)}};
}

void WriteWaterfall(const std::filesystem::path& path, const TriagePolicy& policy,
                    std::span<const ScoredCase> cases) {
  std::vector<const ScoredCase*> sorted;
  for (const auto& c : cases) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const ScoredCase* a, const ScoredCase* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->case_id < b->case_id;
  });
  std::string text = "rank,case_id,score,label,tag\n";
  char buf[64];
  for (size_t i = 0; i < sorted.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g", sorted[i]->score);
    text += std::to_string(i + 1) + "," + sorted[i]->case_id + "," + buf + "," +
            (sorted[i]->positive ? "1" : "0") + "," +
            (policy.IsAuto(sorted[i]->score) ? "auto" : "residual") + "\n";
  }
  WriteTextFile(path, text);
}

}  // namespace frostmil::triage
