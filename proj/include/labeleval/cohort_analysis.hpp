/*
 * Copyright 2026 The labeleval Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Full evaluation of a multi-label test set: one cell per (cohort, label)
// holding raw confusion counts, ratio metrics with logit intervals, and
// rank metrics computed from the cohort's raw scores. Each cohort also has a
// pooled "All" row whose counts are the sum over labels.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "labeleval/core.hpp"
#include "labeleval/curves.hpp"
#include "labeleval/error.hpp"
#include "labeleval/intervals.hpp"
#include "labeleval/metrics.hpp"

namespace labeleval {

inline constexpr std::string_view kPooledLabel = "All";

inline constexpr std::string_view kPooledCaveat =
    "Pooled 'All' rows sum counts over labels of the same images; labels within an image are "
    "not independent, so pooled intervals understate uncertainty.";

enum class UndefinedReason : std::uint8_t {
  kNone,
  kNoPositives,
  kNoNegatives,
  kNoTruePositivePossible,  // no positive predictions, so precision has no denominator
  kEmptyCohort,
};

constexpr std::string_view to_string(UndefinedReason r) {
  switch (r) {
    case UndefinedReason::kNone: return "None";
    case UndefinedReason::kNoPositives: return "NoPositives";
    case UndefinedReason::kNoNegatives: return "NoNegatives";
    case UndefinedReason::kNoTruePositivePossible: return "NoTruePositivePossible";
    case UndefinedReason::kEmptyCohort: return "EmptyCohort";
  }
  return "?";
}

inline std::optional<UndefinedReason> undefined_reason_from_string(std::string_view s) {
  for (const auto r : {UndefinedReason::kNone, UndefinedReason::kNoPositives,
                       UndefinedReason::kNoNegatives, UndefinedReason::kNoTruePositivePossible,
                       UndefinedReason::kEmptyCohort}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

enum class MetricKind : std::uint8_t {
  kSensitivity,
  kSpecificity,
  kPrecision,
  kHammingLoss,
  kAveragePrecision,
  kAuroc,
};

inline constexpr MetricKind kAllMetrics[] = {
    MetricKind::kAveragePrecision, MetricKind::kAuroc,       MetricKind::kSensitivity,
    MetricKind::kSpecificity,      MetricKind::kPrecision,   MetricKind::kHammingLoss,
};

constexpr std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::kSensitivity: return "sensitivity";
    case MetricKind::kSpecificity: return "specificity";
    case MetricKind::kPrecision: return "precision";
    case MetricKind::kHammingLoss: return "hamming_loss";
    case MetricKind::kAveragePrecision: return "average_precision";
    case MetricKind::kAuroc: return "auroc";
  }
  return "?";
}

constexpr std::string_view display_name(MetricKind m) {
  switch (m) {
    case MetricKind::kSensitivity: return "Sensitivity";
    case MetricKind::kSpecificity: return "Specificity";
    case MetricKind::kPrecision: return "Precision";
    case MetricKind::kHammingLoss: return "Hamming loss";
    case MetricKind::kAveragePrecision: return "Average precision";
    case MetricKind::kAuroc: return "AUROC";
  }
  return "?";
}

inline std::optional<MetricKind> metric_from_string(std::string_view s) {
  for (const auto m : kAllMetrics) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

struct MetricCell {
  MetricValue value;
  std::optional<IntervalEstimate> interval;  // ratio metrics only
  UndefinedReason reason = UndefinedReason::kNone;

  bool operator==(const MetricCell&) const = default;
};

struct EvaluationCell {
  ConfusionCounts counts;
  MetricCell sensitivity;
  MetricCell specificity;
  MetricCell precision;
  MetricCell hamming_loss;
  std::optional<MetricCell> average_precision;  // absent on pooled rows
  std::optional<MetricCell> auroc;

  const MetricCell* metric(MetricKind m) const {
    switch (m) {
      case MetricKind::kSensitivity: return &sensitivity;
      case MetricKind::kSpecificity: return &specificity;
      case MetricKind::kPrecision: return &precision;
      case MetricKind::kHammingLoss: return &hamming_loss;
      case MetricKind::kAveragePrecision:
        return average_precision ? &*average_precision : nullptr;
      case MetricKind::kAuroc: return auroc ? &*auroc : nullptr;
    }
    return nullptr;
  }

  bool operator==(const EvaluationCell&) const = default;
};

struct CohortResult {
  CohortSelector selector = CohortSelector::all();
  std::string name;
  std::vector<std::string> member_ids;
  std::vector<EvaluationCell> per_label;
  EvaluationCell pooled;
};

struct PublishedValue {
  MetricKind metric = MetricKind::kSensitivity;
  std::string label;   // a label name or "All"
  std::string cohort;  // a cohort display name
  double value = 0.0;
};

struct ReferenceCheck {
  PublishedValue published;
  std::optional<double> computed;
  bool consistent = false;
};

struct ReportMetadata {
  std::vector<double> thresholds;
  std::vector<std::string> image_ids;
  std::string timestamp;
  double confidence = 0.95;
  std::vector<std::string> notes;
};

struct EvaluationReport {
  LabelSet labels;
  std::vector<CohortResult> cohorts;
  ReportMetadata metadata;
  std::vector<ReferenceCheck> reference_checks;

  const CohortResult* find_cohort(std::string_view name) const {
    for (const auto& c : cohorts) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  // Label name or "All" for the pooled row.
  const EvaluationCell* cell(std::string_view cohort, std::string_view label) const {
    const auto* c = find_cohort(cohort);
    if (c == nullptr) return nullptr;
    if (label == kPooledLabel) return &c->pooled;
    const auto k = labels.index_of(label);
    if (!k) return nullptr;
    return &c->per_label.at(*k);
  }
};

struct EvaluateOptions {
  double confidence = 0.95;
  std::string timestamp;
};

namespace detail {

inline MetricCell ratio_cell(const MetricValue& value, UndefinedReason if_undefined,
                             double confidence) {
  MetricCell cell{value, std::nullopt, UndefinedReason::kNone};
  if (!value.defined()) {
    cell.reason = if_undefined;
  } else {
    cell.interval = interval_for_metric(value, confidence);
  }
  return cell;
}

inline EvaluationCell count_cell(const ConfusionCounts& c, bool empty_cohort, double confidence) {
  const auto reason = [&](UndefinedReason r) {
    return empty_cohort ? UndefinedReason::kEmptyCohort : r;
  };
  EvaluationCell cell;
  cell.counts = c;
  cell.sensitivity = ratio_cell(labeleval::sensitivity(c), reason(UndefinedReason::kNoPositives),
                                confidence);
  cell.specificity = ratio_cell(labeleval::specificity(c), reason(UndefinedReason::kNoNegatives),
                                confidence);
  cell.precision = ratio_cell(labeleval::precision(c),
                              reason(UndefinedReason::kNoTruePositivePossible), confidence);
  cell.hamming_loss = ratio_cell(labeleval::hamming_loss(c), reason(UndefinedReason::kEmptyCohort),
                                 confidence);
  return cell;
}

// AP and AUROC are only reported for cohorts holding both classes.
inline void attach_rank_metrics(EvaluationCell& cell, std::span<const double> scores,
                                std::span<const std::uint8_t> truth) {
  const auto undefined = [](UndefinedReason r) {
    return MetricCell{MetricValue::undefined(), std::nullopt, r};
  };
  UndefinedReason reason = UndefinedReason::kNone;
  if (scores.empty()) {
    reason = UndefinedReason::kEmptyCohort;
  } else if (cell.counts.positives() == 0) {
    reason = UndefinedReason::kNoPositives;
  } else if (cell.counts.negatives() == 0) {
    reason = UndefinedReason::kNoNegatives;
  }
  if (reason != UndefinedReason::kNone) {
    cell.average_precision = undefined(reason);
    cell.auroc = undefined(reason);
    return;
  }
  cell.average_precision = MetricCell{pr_curve(scores, truth).area, std::nullopt,
                                      UndefinedReason::kNone};
  cell.auroc = MetricCell{roc_curve(scores, truth).area, std::nullopt, UndefinedReason::kNone};
}

}  // namespace detail

inline EvaluationReport evaluate(const ScoreMatrix& test_scores, const GroundTruthMatrix& test_truth,
                                 const ThresholdVector& thresholds,
                                 std::span<const CardinalityCohort> cohorts,
                                 const EvaluateOptions& options = {}) {
  detail::require(test_truth.size() > 0, ErrorCode::kInvalidArgument, "empty test set");
  detail::require(thresholds.size() == test_truth.label_count(), ErrorCode::kDimensionMismatch,
                  "threshold count does not match the label count");
  const ScoreMatrix scores = align(test_scores, test_truth);
  const PredictionMatrix pred = binarize(scores, thresholds);
  const auto& truth = test_truth.truth();
  const std::size_t label_count = test_truth.label_count();

  EvaluationReport report;
  report.labels = test_truth.labels();
  report.metadata.thresholds = thresholds.values();
  report.metadata.image_ids = test_truth.image_ids();
  report.metadata.timestamp = options.timestamp;
  report.metadata.confidence = options.confidence;
  report.metadata.notes.emplace_back(kPooledCaveat);

  for (const auto& cohort : cohorts) {
    for (const auto r : cohort.rows) {
      detail::require(r < test_truth.size(), ErrorCode::kMisaligned,
                      "cohort row index outside the test set");
    }
    CohortResult result;
    result.selector = cohort.selector;
    result.name = cohort.selector.name(label_count);
    result.member_ids = cohort.member_ids;
    const bool empty = cohort.rows.empty();
    ConfusionCounts pooled;
    for (std::size_t k = 0; k < label_count; ++k) {
      const auto counts = confusion(truth, pred, k, cohort.rows);
      pooled += counts;
      auto cell = detail::count_cell(counts, empty, options.confidence);
      std::vector<double> s;
      std::vector<std::uint8_t> t;
      s.reserve(cohort.rows.size());
      t.reserve(cohort.rows.size());
      for (const auto r : cohort.rows) {
        s.push_back(scores.scores()(r, k));
        t.push_back(truth(r, k));
      }
      detail::attach_rank_metrics(cell, s, t);
      result.per_label.push_back(std::move(cell));
    }
    result.pooled = detail::count_cell(pooled, empty, options.confidence);
    report.cohorts.push_back(std::move(result));
  }
  return report;
}

inline EvaluationReport evaluate(const ScoreMatrix& test_scores, const GroundTruthMatrix& test_truth,
                                 const ThresholdVector& thresholds,
                                 const EvaluateOptions& options = {}) {
  const auto cohorts = standard_cohorts(test_truth);
  return evaluate(test_scores, test_truth, thresholds, cohorts, options);
}

// Recomputes everything derivable from stored counts and returns a list of
// inconsistencies (empty when the report is self-consistent).
inline std::vector<std::string> self_check(const EvaluationReport& report) {
  std::vector<std::string> problems;
  const double confidence = report.metadata.confidence;
  const std::size_t label_count = report.labels.size();

  const auto check_cell = [&](const EvaluationCell& cell, const std::string& where,
                              std::size_t cohort_size, bool pooled) {
    const auto expected_total =
        static_cast<std::int64_t>(cohort_size * (pooled ? label_count : std::size_t{1}));
    if (cell.counts.total() != expected_total) {
      problems.push_back(where + ": counts total " + std::to_string(cell.counts.total()) +
                         " != decisions " + std::to_string(expected_total));
    }
    const auto expected = detail::count_cell(cell.counts, cohort_size == 0, confidence);
    for (const auto m : {MetricKind::kSensitivity, MetricKind::kSpecificity,
                         MetricKind::kPrecision, MetricKind::kHammingLoss}) {
      if (!(*cell.metric(m) == *expected.metric(m))) {
        problems.push_back(where + ": " + std::string(to_string(m)) +
                           " does not match its counts");
      }
    }
    for (const auto m : {MetricKind::kAveragePrecision, MetricKind::kAuroc}) {
      const auto* mc = cell.metric(m);
      if (mc == nullptr) continue;
      if (mc->value.defined() == (mc->reason != UndefinedReason::kNone)) {
        problems.push_back(where + ": " + std::string(to_string(m)) +
                           " reason code inconsistent with value");
      }
      if (mc->value.defined()) {
        const double v = mc->value.value();
        if (!(v >= 0.0 && v <= 1.0)) {
          problems.push_back(where + ": " + std::string(to_string(m)) + " outside [0, 1]");
        }
      }
    }
  };

  for (const auto& cohort : report.cohorts) {
    if (cohort.per_label.size() != label_count) {
      problems.push_back("cohort " + cohort.name + ": wrong number of label cells");
      continue;
    }
    ConfusionCounts sum;
    for (std::size_t k = 0; k < label_count; ++k) {
      sum += cohort.per_label[k].counts;
      check_cell(cohort.per_label[k], "cohort " + cohort.name + " label " + report.labels.name(k),
                 cohort.member_ids.size(), false);
    }
    check_cell(cohort.pooled, "cohort " + cohort.name + " pooled", cohort.member_ids.size(), true);
    if (!(sum == cohort.pooled.counts)) {
      problems.push_back("cohort " + cohort.name + ": pooled counts are not the label sum");
    }
  }

  // Exactly(c) cohorts must add up to the whole set and to MoreThanOne.
  const CohortResult* all = nullptr;
  const CohortResult* more = nullptr;
  std::vector<const CohortResult*> exact(label_count + 1, nullptr);
  for (const auto& c : report.cohorts) {
    switch (c.selector.kind()) {
      case CohortSelector::Kind::kAll: all = &c; break;
      case CohortSelector::Kind::kMoreThanOne: more = &c; break;
      case CohortSelector::Kind::kExactly:
        if (c.selector.cardinality() <= label_count) exact[c.selector.cardinality()] = &c;
        break;
    }
  }
  const auto additivity = [&](const CohortResult* target, std::size_t from, const char* what) {
    if (target == nullptr) return;
    for (std::size_t c = from; c <= label_count; ++c) {
      if (exact[c] == nullptr) return;
    }
    for (std::size_t k = 0; k < label_count; ++k) {
      ConfusionCounts sum;
      for (std::size_t c = from; c <= label_count; ++c) sum += exact[c]->per_label[k].counts;
      if (!(sum == target->per_label[k].counts)) {
        problems.push_back(std::string(what) + " counts for label " + report.labels.name(k) +
                           " are not the sum of the exact-cardinality cohorts");
      }
    }
  };
  additivity(all, 0, "whole-set");
  additivity(more, 2, ">1");
  return problems;
}

inline void require_self_consistent(const EvaluationReport& report) {
  const auto problems = self_check(report);
  if (problems.empty()) return;
  std::string message = "report self-check failed:";
  for (const auto& p : problems) message += "\n  " + p;
  throw Error(ErrorCode::kSelfCheck, message);
}

// Compares computed cells against externally published values and records
// each comparison, plus a note for every discrepancy.
inline void check_reference(EvaluationReport& report, std::span<const PublishedValue> published,
                            double tolerance = 0.001) {
  for (const auto& pv : published) {
    ReferenceCheck check{pv, std::nullopt, false};
    if (const auto* cell = report.cell(pv.cohort, pv.label)) {
      if (const auto* mc = cell->metric(pv.metric); mc != nullptr && mc->value.defined()) {
        check.computed = mc->value.value();
        check.consistent = std::abs(*check.computed - pv.value) <= tolerance + 1e-12;
      }
    }
    if (!check.consistent) {
      char buf[256];
      if (check.computed) {
        std::snprintf(buf, sizeof buf, "published %s for %s, cohort %s is %.3f; counts give %.3f",
                      std::string(to_string(pv.metric)).c_str(), pv.label.c_str(),
                      pv.cohort.c_str(), pv.value, *check.computed);
      } else {
        std::snprintf(buf, sizeof buf, "published %s for %s, cohort %s is %.3f; not computable",
                      std::string(to_string(pv.metric)).c_str(), pv.label.c_str(),
                      pv.cohort.c_str(), pv.value);
      }
      report.metadata.notes.emplace_back(buf);
    }
    report.reference_checks.push_back(std::move(check));
  }
}

struct ComparisonRow {
  std::string cohort;
  std::string label;
  MetricKind metric = MetricKind::kSensitivity;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> delta;  // b - a, when both are defined
};

struct ComparisonTable {
  std::vector<std::string> cohorts;
  std::vector<std::string> labels;  // label names followed by "All"
  std::vector<ComparisonRow> rows;

  const ComparisonRow* find(std::string_view cohort, std::string_view label, MetricKind m) const {
    for (const auto& r : rows) {
      if (r.cohort == cohort && r.label == label && r.metric == m) return &r;
    }
    return nullptr;
  }
};

// Side-by-side cells of two reports over the same labels and cohorts.
inline ComparisonTable compare_networks(const EvaluationReport& a, const EvaluationReport& b) {
  detail::require(a.labels == b.labels, ErrorCode::kIncompatible, "reports use different labels");
  detail::require(a.cohorts.size() == b.cohorts.size(), ErrorCode::kIncompatible,
                  "reports use different cohorts");
  ComparisonTable table;
  table.labels = a.labels.names();
  table.labels.emplace_back(kPooledLabel);
  for (std::size_t c = 0; c < a.cohorts.size(); ++c) {
    detail::require(a.cohorts[c].name == b.cohorts[c].name, ErrorCode::kIncompatible,
                    "reports use different cohorts");
    table.cohorts.push_back(a.cohorts[c].name);
    for (const auto& label : table.labels) {
      const auto* ca = a.cell(a.cohorts[c].name, label);
      const auto* cb = b.cell(b.cohorts[c].name, label);
      for (const auto m : kAllMetrics) {
        const auto* ma = ca->metric(m);
        const auto* mb = cb->metric(m);
        if (ma == nullptr && mb == nullptr) continue;
        ComparisonRow row{a.cohorts[c].name, label, m, std::nullopt, std::nullopt, std::nullopt};
        if (ma != nullptr) row.a = ma->value.maybe();
        if (mb != nullptr) row.b = mb->value.maybe();
        if (row.a && row.b) row.delta = *row.b - *row.a;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

}  // namespace labeleval
