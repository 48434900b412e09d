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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "labeleval/core.hpp"
#include "labeleval/error.hpp"

namespace labeleval {

struct ConfusionCounts {
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tp = 0;

  std::int64_t total() const noexcept { return tn + fp + fn + tp; }
  std::int64_t positives() const noexcept { return tp + fn; }
  std::int64_t negatives() const noexcept { return tn + fp; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    tp += o.tp;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) noexcept {
    return a += b;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

// A metric that is either a number or explicitly Undefined. Ratio metrics
// keep their integer numerator and denominator so they can be recomputed and
// turned into binomial intervals; areas (AP, AUROC) are plain reals.
class MetricValue {
 public:
  static MetricValue ratio(std::int64_t numerator, std::int64_t denominator) {
    detail::require(numerator >= 0 && denominator >= 0 && numerator <= denominator,
                    ErrorCode::kInvalidArgument, "ratio needs 0 <= numerator <= denominator");
    MetricValue v;
    v.numerator_ = numerator;
    v.denominator_ = denominator;
    v.is_ratio_ = true;
    if (denominator > 0) {
      v.value_ = static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    return v;
  }

  static MetricValue real(double value) {
    MetricValue v;
    v.value_ = value;
    return v;
  }

  static MetricValue undefined() { return MetricValue{}; }

  // Rebuilds a stored value verbatim (deserialization); no consistency check.
  static MetricValue from_parts(std::optional<double> value, std::int64_t numerator,
                                std::int64_t denominator, bool is_ratio) {
    MetricValue v;
    v.value_ = value;
    v.numerator_ = numerator;
    v.denominator_ = denominator;
    v.is_ratio_ = is_ratio;
    return v;
  }

  bool defined() const noexcept { return value_.has_value(); }
  bool is_ratio() const noexcept { return is_ratio_; }
  std::int64_t numerator() const noexcept { return numerator_; }
  std::int64_t denominator() const noexcept { return denominator_; }
  std::optional<double> maybe() const noexcept { return value_; }

  double value() const {
    detail::require(value_.has_value(), ErrorCode::kUndefined, "metric is undefined");
    return *value_;
  }

  bool operator==(const MetricValue&) const = default;

 private:
  std::optional<double> value_;
  std::int64_t numerator_ = 0;
  std::int64_t denominator_ = 0;
  bool is_ratio_ = false;
};

inline ConfusionCounts confusion(std::span<const std::uint8_t> truth,
                                 std::span<const std::uint8_t> pred) {
  detail::require(truth.size() == pred.size(), ErrorCode::kDimensionMismatch,
                  "truth and prediction lengths differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] != 0;
    const bool p = pred[i] != 0;
    if (t && p) {
      ++c.tp;
    } else if (t) {
      ++c.fn;
    } else if (p) {
      ++c.fp;
    } else {
      ++c.tn;
    }
  }
  return c;
}

// Counts for one label column restricted to the given rows.
inline ConfusionCounts confusion(const BinaryMatrix& truth, const BinaryMatrix& pred,
                                 std::size_t column, std::span<const std::size_t> rows) {
  detail::require(truth.rows() == pred.rows() && truth.cols() == pred.cols(),
                  ErrorCode::kDimensionMismatch, "truth and prediction shapes differ");
  detail::require(column < truth.cols(), ErrorCode::kDimensionMismatch, "column out of range");
  ConfusionCounts c;
  for (const std::size_t r : rows) {
    const bool t = truth(r, column) != 0;
    const bool p = pred(r, column) != 0;
    c.tp += t && p;
    c.fn += t && !p;
    c.fp += !t && p;
    c.tn += !t && !p;
  }
  return c;
}

inline MetricValue sensitivity(const ConfusionCounts& c) {
  return MetricValue::ratio(c.tp, c.tp + c.fn);
}

inline MetricValue specificity(const ConfusionCounts& c) {
  return MetricValue::ratio(c.tn, c.tn + c.fp);
}

inline MetricValue precision(const ConfusionCounts& c) {
  return MetricValue::ratio(c.tp, c.tp + c.fp);
}

inline MetricValue accuracy(const ConfusionCounts& c) {
  return MetricValue::ratio(c.tp + c.tn, c.total());
}

// Fraction of incorrect decisions, (fp + fn) / total.
inline MetricValue hamming_loss(const ConfusionCounts& c) {
  return MetricValue::ratio(c.fp + c.fn, c.total());
}

// Whole-matrix Hamming loss.
inline MetricValue hamming_loss(const BinaryMatrix& truth, const BinaryMatrix& pred) {
  detail::require(truth.rows() == pred.rows() && truth.cols() == pred.cols(),
                  ErrorCode::kDimensionMismatch, "truth and prediction shapes differ");
  return hamming_loss(confusion(truth.data(), pred.data()));
}

// Hamming loss of a single label column.
inline MetricValue hamming_loss(const BinaryMatrix& truth, const BinaryMatrix& pred,
                                std::size_t column) {
  detail::require(truth.rows() == pred.rows() && truth.cols() == pred.cols(),
                  ErrorCode::kDimensionMismatch, "truth and prediction shapes differ");
  std::vector<std::size_t> rows(truth.rows());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return hamming_loss(confusion(truth, pred, column, rows));
}

}  // namespace labeleval
