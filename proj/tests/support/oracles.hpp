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

// Brute-force reference implementations. They share no code with the
// library beyond plain data types.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace oracle {

// Standard normal quantile by bisection on erfc.
inline double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct Interval {
  double point;
  std::optional<double> lower;
  std::optional<double> upper;
};

inline Interval logit_interval(std::int64_t s, std::int64_t n, double confidence) {
  const double p = static_cast<double>(s) / static_cast<double>(n);
  if (s == 0 || s == n) return {p, std::nullopt, std::nullopt};
  const double z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
  const double centre = std::log(p / (1.0 - p));
  const double half = z / std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  const auto expit = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  return {p, expit(centre - half), expit(centre + half)};
}

// Step-interpolated AP: mean over positives of the precision at that
// positive's score used as the threshold. Undefined without positives.
inline std::optional<double> average_precision(const std::vector<double>& scores,
                                               const std::vector<std::uint8_t>& truth) {
  std::size_t positives = 0;
  for (const auto t : truth) positives += t;
  if (positives == 0) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!truth[i]) continue;
    std::size_t above = 0;
    std::size_t above_pos = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (scores[j] >= scores[i]) {
        ++above;
        above_pos += truth[j];
      }
    }
    sum += static_cast<double>(above_pos) / static_cast<double>(above);
  }
  return sum / static_cast<double>(positives);
}

// Same definition in exact rational arithmetic, rounded once to double.
inline std::optional<double> average_precision_exact(const std::vector<double>& scores,
                                                     const std::vector<std::uint8_t>& truth) {
  using Q = boost::rational<std::int64_t>;
  std::int64_t positives = 0;
  for (const auto t : truth) positives += t;
  if (positives == 0) return std::nullopt;
  Q sum(0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!truth[i]) continue;
    std::int64_t above = 0;
    std::int64_t above_pos = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (scores[j] >= scores[i]) {
        ++above;
        above_pos += truth[j];
      }
    }
    sum += Q(above_pos, above);
  }
  sum /= positives;
  return static_cast<double>(sum.numerator()) / static_cast<double>(sum.denominator());
}

// Mann-Whitney pair statistic with ties counted one half.
inline std::optional<double> auroc(const std::vector<double>& scores,
                                   const std::vector<std::uint8_t>& truth) {
  std::int64_t twice = 0;
  std::int64_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!truth[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (truth[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) twice += 2;
      if (scores[i] == scores[j]) twice += 1;
    }
  }
  if (pairs == 0) return std::nullopt;
  return static_cast<double>(twice) / (2.0 * static_cast<double>(pairs));
}

// sensitivity + specificity at threshold t (prediction = score >= t).
inline double youden_objective(const std::vector<double>& scores,
                               const std::vector<std::uint8_t>& truth, double t) {
  double tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= t;
    if (truth[i]) {
      (pred ? tp : fn) += 1;
    } else {
      (pred ? fp : tn) += 1;
    }
  }
  return tp / (tp + fn) + tn / (tn + fp);
}

// Weighted channel sum, C x H x W row-major features.
inline std::vector<double> lam_raw(const std::vector<float>& features, std::size_t c,
                                   std::size_t h, std::size_t w,
                                   const std::vector<double>& weights, double bias) {
  std::vector<double> out(h * w, 0.0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) {
        acc += weights[k] * static_cast<double>(features[(k * h + y) * w + x]);
      }
      out[y * w + x] = acc + bias;
    }
  }
  return out;
}

inline std::vector<double> min_max(const std::vector<double>& v) {
  double lo = v[0];
  double hi = v[0];
  for (const double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<double> out;
  for (const double x : v) out.push_back(hi > lo ? (x - lo) / (hi - lo) : 0.5);
  return out;
}

}  // namespace oracle
