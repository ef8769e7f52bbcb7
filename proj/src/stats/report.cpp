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

#include "frostmil/stats/report.h"

#include <cmath>
#include <cstdio>
#include <functional>

#include "frostmil/stats/bootstrap.h"
#include "frostmil/stats/metrics.h"

namespace frostmil::stats {

namespace {

using SubsetMetric = std::function<double(std::span<const size_t>)>;

struct Gathered {
  ScoreMatrix scores;
  std::vector<int> labels;
  std::vector<double> positive_scores;
  std::vector<int> positive;
};

Gathered Gather(const std::vector<ScoredItem>& items, std::span<const size_t> idx,
                const EvalOptions& o) {
  Gathered g;
  g.scores.classes = o.classes;
  g.scores.values.reserve(idx.size() * static_cast<size_t>(o.classes));
  for (size_t i : idx) {
    const ScoredItem& it = items[i];
    g.scores.values.insert(g.scores.values.end(), it.scores.begin(), it.scores.end());
    g.labels.push_back(it.label);
    if (o.classes == 2) {
      g.positive_scores.push_back(it.scores[static_cast<size_t>(o.positive_class)]);
      g.positive.push_back(it.label == o.positive_class);
    }
  }
  return g;
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const std::map<std::string, std::string>& DisplayNames() {
  static const std::map<std::string, std::string> names = {
      {"auroc", "AUROC"},         {"spec_at_sens_90", "Spe@90"},
      {"spec_at_sens_95", "Spe@95"}, {"accuracy", "Accuracy"},
      {"f1", "F1"},               {"macro_auc", "Macro AUC"},
      {"top1_accuracy", "Top-1"}, {"top2_accuracy", "Top-2"},
      {"balanced_accuracy", "Balanced Acc."}, {"weighted_f1", "Weighted F1"}};
  return names;
}

Json NumberOrString(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "+inf" : "-inf";
}

}  // namespace

const std::vector<std::string>& BinaryMetricNames() {
  static const std::vector<std::string> names = {"auroc", "spec_at_sens_90", "spec_at_sens_95",
                                                 "accuracy", "f1"};
  return names;
}

const std::vector<std::string>& MulticlassMetricNames() {
  static const std::vector<std::string> names = {"macro_auc", "top1_accuracy", "top2_accuracy",
                                                 "accuracy", "balanced_accuracy", "weighted_f1"};
  return names;
}

EvalReport Evaluate(const std::vector<ScoredItem>& items, const EvalOptions& o) {
  if (o.classes < 2) throw ValidationError("eval: need at least 2 classes");
  for (const auto& it : items) {
    if (static_cast<int>(it.scores.size()) != o.classes) {
      throw ValidationError("eval: item " + it.id + " has " + std::to_string(it.scores.size()) +
                            " scores, expected " + std::to_string(o.classes));
    }
    if (it.label < 0 || it.label >= o.classes) {
      throw ValidationError("eval: item " + it.id + " label out of range");
    }
    for (double s : it.scores) {
      if (!std::isfinite(s)) throw ValidationError("eval: item " + it.id + " has a non-finite score");
    }
  }
  EvalReport report;
  report.n_items = items.size();
  report.seed = o.seed;

  std::vector<std::pair<std::string, SubsetMetric>> metrics;
  const auto gather = [&](std::span<const size_t> idx) { return Gather(items, idx, o); };
  if (o.classes == 2) {
    metrics.emplace_back("auroc", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return Auroc(g.positive_scores, g.positive);
    });
    for (int target : {90, 95}) {
      metrics.emplace_back("spec_at_sens_" + std::to_string(target),
                           [&, target](std::span<const size_t> idx) {
                             const Gathered g = gather(idx);
                             return SpecAtSens(g.positive_scores, g.positive, target / 100.0)
                                 .specificity;
                           });
    }
    metrics.emplace_back("accuracy", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return Accuracy(Argmax(g.scores), g.labels);
    });
    metrics.emplace_back("f1", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return F1(Argmax(g.scores), g.labels, o.positive_class);
    });
  } else {
    metrics.emplace_back("macro_auc", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return MacroAuc(g.scores, g.labels);
    });
    metrics.emplace_back("top1_accuracy", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return TopKAccuracy(g.scores, g.labels, 1);
    });
    metrics.emplace_back("top2_accuracy", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return TopKAccuracy(g.scores, g.labels, 2);
    });
    metrics.emplace_back("accuracy", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return Accuracy(Argmax(g.scores), g.labels);
    });
    metrics.emplace_back("balanced_accuracy", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return BalancedAccuracy(Argmax(g.scores), g.labels, o.classes);
    });
    metrics.emplace_back("weighted_f1", [&](std::span<const size_t> idx) {
      const Gathered g = gather(idx);
      return WeightedF1(Argmax(g.scores), g.labels, o.classes);
    });
    std::vector<size_t> all(items.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    const Gathered g = gather(all);
    if (!items.empty()) {
      try {
        MacroAuc(g.scores, g.labels, &report.warnings);
      } catch (const UndefinedMetricError&) {
      }
    }
  }

  for (const auto& [name, fn] : metrics) {
    Interval ci;
    try {
      ci = BootstrapCi(items.size(), fn, o.bootstrap_iters, o.level, o.seed);
    } catch (const UndefinedMetricError& e) {
      throw UndefinedMetricError("metric " + name + ": " + e.what());
    }
    report.metrics[name] = MetricValue{ci.point, ci.lo, ci.hi};
  }
  if (o.classes == 2) {
    std::vector<size_t> all(items.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    const Gathered g = gather(all);
    report.thresholds["spec_at_sens_90"] = SpecAtSens(g.positive_scores, g.positive, 0.90).threshold;
    report.thresholds["spec_at_sens_95"] = SpecAtSens(g.positive_scores, g.positive, 0.95).threshold;
  }
  return report;
}

std::vector<SubgroupResult> SubgroupReport(const std::vector<ScoredItem>& items,
                                           const std::string& key, const EvalOptions& options) {
  std::map<std::string, std::vector<ScoredItem>> groups;
  for (const auto& it : items) {
    auto tag = it.tags.find(key);
    if (tag == it.tags.end()) {
      throw ValidationError("subgroup_report: item " + it.id + " has no '" + key + "' tag");
    }
    groups[tag->second].push_back(it);
  }
  std::vector<SubgroupResult> out;
  for (const auto& [group, members] : groups) {
    SubgroupResult r;
    r.group = group;
    try {
      r.report = Evaluate(members, options);
    } catch (const UndefinedMetricError&) {
      r.skipped = true;
      r.reason = "skipped: single class";
      r.report.n_items = members.size();
    }
    out.push_back(std::move(r));
  }
  return out;
}

Json ToJson(const EvalReport& r) {
  Json metrics = Json::object();
  for (const auto& [name, v] : r.metrics) {
    metrics[name] = Json{{"point", v.point}, {"ci_low", v.ci_low}, {"ci_high", v.ci_high}};
  }
  Json thresholds = Json::object();
  for (const auto& [name, t] : r.thresholds) thresholds[name] = NumberOrString(t);
  Json comparisons = Json::array();
  for (const auto& c : r.comparisons) {
    comparisons.push_back(Json{{"model_a", c.model_a}, {"model_b", c.model_b},
                               {"raw_p", c.raw_p}, {"adjusted_p", c.adjusted_p},
                               {"n_pairs", c.n_pairs}});
  }
  return Json{{"task", r.task},         {"model", r.model},
              {"n_items", r.n_items},   {"seed", r.seed},
              {"metrics", metrics},     {"thresholds", thresholds},
              {"comparisons", comparisons}, {"warnings", r.warnings}};
}

Json ToJson(const std::vector<SubgroupResult>& groups) {
  Json out = Json::object();
  for (const auto& g : groups) {
    if (g.skipped) {
      out[g.group] = Json{{"skipped", true}, {"reason", g.reason}, {"n_items", g.report.n_items}};
    } else {
      Json j = ToJson(g.report);
      j["skipped"] = false;
      out[g.group] = j;
    }
  }
  return out;
}

std::string RenderMarkdown(const EvalReport& r, const std::vector<SubgroupResult>& groups) {
  const auto& names = r.metrics.count("auroc") ? BinaryMetricNames() : MulticlassMetricNames();
  const auto row = [&](const std::string& label, const EvalReport& rep) {
    std::string line = "| " + label + " | " + std::to_string(rep.n_items) + " |";
    for (const auto& n : names) {
      auto it = rep.metrics.find(n);
      if (it == rep.metrics.end()) {
        line += " n/a |";
        continue;
      }
      line += " " + Percent(it->second.point) + " [" + Percent(it->second.ci_low) + ", " +
              Percent(it->second.ci_high) + "] |";
    }
    return line + "\n";
  };
  std::string md = "# Evaluation report: " + r.task + "\n\nModel: " + r.model +
                   ". Values are point estimates with bootstrap 95% CIs.\n\n";
  std::string header = "| Group | N |";
  std::string rule = "|---|---|";
  for (const auto& n : names) {
    header += " " + DisplayNames().at(n) + " |";
    rule += "---|";
  }
  md += header + "\n" + rule + "\n" + row("Overall", r);
  for (const auto& g : groups) {
    if (g.skipped) {
      md += "| " + g.group + " | " + std::to_string(g.report.n_items) + " | " + g.reason + " |\n";
    } else {
      md += row(g.group, g.report);
    }
  }
  if (!r.comparisons.empty()) {
    md += "\n| Model A | Model B | p (raw) | p (Holm) |\n|---|---|---|---|\n";
    for (const auto& c : r.comparisons) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), " %.4g | %.4g |", c.raw_p, c.adjusted_p);
      md += "| " + c.model_a + " | " + c.model_b + " |" + buf + "\n";
    }
  }
  return md;
}

}  // namespace frostmil::stats
