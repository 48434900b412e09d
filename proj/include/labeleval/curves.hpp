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

// Precision-recall and ROC curves from a descending threshold sweep.
//
// Every distinct score is one threshold; items sharing a score cross it
// together. Each point stores the cumulative (tp, fp) at its threshold so
// that areas can be computed from integer counts.
//
// Average precision uses step interpolation,
//   AP = sum_n (recall_n - recall_{n-1}) * precision_n,
// which is not the same as the trapezoidal area under the PR polyline.
// AUROC is the trapezoidal area under (FPR, TPR), accumulated in integers
// so that it is bit-identical to the Mann-Whitney pair statistic with ties
// counted one half.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "labeleval/error.hpp"
#include "labeleval/metrics.hpp"

namespace labeleval {

enum class CurveKind : std::uint8_t { kPrecisionRecall, kRoc };

struct CurvePoint {
  double x = 0.0;          // recall (PR) or false-positive rate (ROC)
  double y = 0.0;          // precision (PR) or true-positive rate (ROC)
  double threshold = 0.0;  // +inf for the leading sentinel
  std::int64_t tp = 0;
  std::int64_t fp = 0;

  bool is_sentinel() const noexcept { return threshold == std::numeric_limits<double>::infinity(); }
  bool operator==(const CurvePoint&) const = default;
};

struct Curve {
  CurveKind kind = CurveKind::kPrecisionRecall;
  std::vector<CurvePoint> points;  // empty when the curve is undefined
  MetricValue area;
  std::int64_t positives = 0;
  std::int64_t negatives = 0;

  bool defined() const noexcept { return !points.empty(); }
};

namespace detail {

struct SweepStep {
  double threshold;
  std::int64_t tp;
  std::int64_t fp;
};

// Cumulative counts at each distinct score, highest score first.
inline std::vector<SweepStep> sweep(std::span<const double> scores,
                                    std::span<const std::uint8_t> truth) {
  require(scores.size() == truth.size(), ErrorCode::kDimensionMismatch,
          "score and truth lengths differ");
  require(!scores.empty(), ErrorCode::kInvalidArgument, "empty input");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<SweepStep> steps;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (truth[order[i]] != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    steps.push_back({s, tp, fp});
  }
  return steps;
}

inline double ratio(std::int64_t a, std::int64_t b) {
  return static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace detail

// Step-interpolated area under a PR curve.
inline MetricValue average_precision(const Curve& curve) {
  detail::require(curve.kind == CurveKind::kPrecisionRecall, ErrorCode::kInvalidArgument,
                  "average precision needs a precision-recall curve");
  detail::require(curve.defined(), ErrorCode::kUndefined, "precision-recall curve is undefined");
  // Extended precision with a single final rounding gives the correctly
  // rounded rational for small inputs.
  long double sum = 0.0L;
  std::int64_t prev_tp = 0;
  for (const auto& p : curve.points) {
    if (p.tp > prev_tp) {
      sum += static_cast<long double>(p.tp - prev_tp) * static_cast<long double>(p.tp) /
             static_cast<long double>(p.tp + p.fp);
    }
    prev_tp = p.tp;
  }
  return MetricValue::real(static_cast<double>(sum / static_cast<long double>(curve.positives)));
}

// Trapezoidal area under a ROC curve.
inline MetricValue auroc(const Curve& curve) {
  detail::require(curve.kind == CurveKind::kRoc, ErrorCode::kInvalidArgument,
                  "AUROC needs a ROC curve");
  detail::require(curve.defined(), ErrorCode::kUndefined, "ROC curve is undefined");
  // Twice the area in units of (1/N) x (1/P).
  std::int64_t doubled = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    doubled += (b.fp - a.fp) * (b.tp + a.tp);
  }
  return MetricValue::real(static_cast<double>(doubled) /
                           (2.0 * static_cast<double>(curve.positives) *
                            static_cast<double>(curve.negatives)));
}

// Points at every distinct score, preceded by the (recall 0, precision 1)
// sentinel. Undefined (no points) when there are no positives.
inline Curve pr_curve(std::span<const double> scores, std::span<const std::uint8_t> truth) {
  const auto steps = detail::sweep(scores, truth);
  Curve curve;
  curve.kind = CurveKind::kPrecisionRecall;
  curve.positives = steps.back().tp;
  curve.negatives = steps.back().fp;
  if (curve.positives == 0) return curve;
  curve.points.reserve(steps.size() + 1);
  curve.points.push_back({0.0, 1.0, std::numeric_limits<double>::infinity(), 0, 0});
  for (const auto& s : steps) {
    curve.points.push_back({detail::ratio(s.tp, curve.positives), detail::ratio(s.tp, s.tp + s.fp),
                            s.threshold, s.tp, s.fp});
  }
  curve.area = average_precision(curve);
  return curve;
}

// (FPR, TPR) at every distinct score, from (0, 0) to (1, 1). Undefined when
// either class is absent.
inline Curve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> truth) {
  const auto steps = detail::sweep(scores, truth);
  Curve curve;
  curve.kind = CurveKind::kRoc;
  curve.positives = steps.back().tp;
  curve.negatives = steps.back().fp;
  if (curve.positives == 0 || curve.negatives == 0) return curve;
  curve.points.reserve(steps.size() + 1);
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity(), 0, 0});
  for (const auto& s : steps) {
    curve.points.push_back({detail::ratio(s.fp, curve.negatives),
                            detail::ratio(s.tp, curve.positives), s.threshold, s.tp, s.fp});
  }
  curve.area = auroc(curve);
  return curve;
}

struct RecallThreshold {
  double recall;
  double threshold;
  bool operator==(const RecallThreshold&) const = default;
};

// For each achieved non-zero recall, the largest threshold that achieves it.
inline std::vector<RecallThreshold> threshold_trace(const Curve& curve) {
  detail::require(curve.defined(), ErrorCode::kUndefined, "curve is undefined");
  std::vector<RecallThreshold> out;
  double last = 0.0;
  for (const auto& p : curve.points) {
    if (p.is_sentinel()) continue;
    const double recall = curve.kind == CurveKind::kPrecisionRecall ? p.x : p.y;
    if (recall > last) {
      out.push_back({recall, p.threshold});
      last = recall;
    }
  }
  return out;
}

}  // namespace labeleval
