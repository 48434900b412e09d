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

#include <cmath>
#include <cstdint>
#include <optional>

#include <boost/math/distributions/normal.hpp>

#include "labeleval/error.hpp"
#include "labeleval/metrics.hpp"

namespace labeleval {

struct IntervalEstimate {
  double point = 0.0;
  std::optional<double> lower;  // both bounds are absent when point is 0 or 1
  std::optional<double> upper;
  double confidence = 0.95;
  double z = 1.959963984540054;
  std::int64_t n = 0;
  std::int64_t successes = 0;

  bool bounded() const noexcept { return lower.has_value() && upper.has_value(); }
  bool operator==(const IntervalEstimate&) const = default;
};

// Two-sided standard normal quantile for the given confidence level.
inline double z_for_confidence(double confidence) {
  detail::require(std::isfinite(confidence) && confidence > 0.0 && confidence < 1.0,
                  ErrorCode::kInvalidArgument, "confidence must lie in (0, 1)");
  const boost::math::normal standard;
  return boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
}

// Binomial proportion interval built on the logit scale:
//   logit(p) +/- z * sqrt(1 / (n p (1 - p)))
// mapped back through the logistic function. Bounds are undefined at p = 0
// and p = 1, where the logit diverges.
inline IntervalEstimate logit_interval(std::int64_t successes, std::int64_t n,
                                       double confidence = 0.95) {
  detail::require(n > 0, ErrorCode::kInvalidArgument, "interval needs n > 0");
  detail::require(successes >= 0 && successes <= n, ErrorCode::kInvalidArgument,
                  "interval needs 0 <= successes <= n");
  IntervalEstimate est;
  est.confidence = confidence;
  est.z = z_for_confidence(confidence);
  est.n = n;
  est.successes = successes;
  est.point = static_cast<double>(successes) / static_cast<double>(n);
  if (successes == 0 || successes == n) return est;

  const double p = est.point;
  const double center = std::log(p / (1.0 - p));
  const double half_width = est.z * std::sqrt(1.0 / (static_cast<double>(n) * p * (1.0 - p)));
  const auto logistic = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  est.lower = logistic(center - half_width);
  est.upper = logistic(center + half_width);
  return est;
}

// Applies logit_interval to a ratio metric's numerator and denominator.
inline IntervalEstimate interval_for_metric(const MetricValue& metric, double confidence = 0.95) {
  detail::require(metric.defined(), ErrorCode::kUndefined,
                  "cannot build an interval for an undefined metric");
  detail::require(metric.is_ratio(), ErrorCode::kInvalidArgument,
                  "intervals need a count-based metric");
  return logit_interval(metric.numerator(), metric.denominator(), confidence);
}

}  // namespace labeleval
