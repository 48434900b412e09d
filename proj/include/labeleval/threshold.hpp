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

// Per-label operating-point selection on a validation split by maximizing
// sensitivity + specificity.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "labeleval/core.hpp"
#include "labeleval/error.hpp"

namespace labeleval {

// Candidates k * step for k = 1 .. while < 1.
struct FixedStep {
  double step = 0.05;
};

// Candidates at every distinct observed score strictly inside (0, 1). A
// score of exactly 1 is replaced by the midpoint between the next lower
// distinct score and 1, which selects the same samples.
struct ObservedScores {};

using ThresholdGrid = std::variant<FixedStep, ObservedScores>;

struct ThresholdSearchResult {
  std::size_t label_index = 0;
  double chosen = 0.0;
  double objective = 0.0;  // sensitivity + specificity at `chosen`
  std::size_t candidates_evaluated = 0;
  std::vector<double> tie_set;  // every candidate attaining the maximum, descending
  // True when no candidate beats a constant predictor (objective <= 1).
  bool non_discriminative = false;
};

namespace detail {

inline std::vector<double> grid_candidates(const FixedStep& grid) {
  require(std::isfinite(grid.step) && grid.step > 0.0 && grid.step < 1.0,
          ErrorCode::kInvalidArgument, "grid step must lie in (0, 1)");
  std::vector<double> out;
  const double inverse = 1.0 / grid.step;
  const double whole = std::round(inverse);
  if (std::abs(inverse - whole) < 1e-9) {
    // k / n is the nearest double to the decimal grid point; k * step is not.
    const auto n = static_cast<std::int64_t>(whole);
    for (std::int64_t k = 1; k < n; ++k) out.push_back(static_cast<double>(k) / whole);
  } else {
    for (std::int64_t k = 1; static_cast<double>(k) * grid.step < 1.0; ++k) {
      out.push_back(static_cast<double>(k) * grid.step);
    }
  }
  return out;
}

inline std::vector<double> observed_candidates(std::span<const double> scores) {
  std::vector<double> distinct(scores.begin(), scores.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const double s = distinct[i];
    if (s > 0.0 && s < 1.0) {
      out.push_back(s);
    } else if (s >= 1.0) {
      const double below = i > 0 ? distinct[i - 1] : 0.0;
      out.push_back(0.5 * (below + 1.0));
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<double> threshold_candidates(const ThresholdGrid& grid,
                                                std::span<const double> scores) {
  if (const auto* fixed = std::get_if<FixedStep>(&grid)) return detail::grid_candidates(*fixed);
  return detail::observed_candidates(scores);
}

// Evaluates sensitivity + specificity at every candidate and returns the
// maximizer; ties go to the largest threshold. Throws kDegenerate when the
// validation truth holds a single class.
inline ThresholdSearchResult select_threshold(std::span<const double> scores,
                                              std::span<const std::uint8_t> truth,
                                              const ThresholdGrid& grid,
                                              std::size_t label_index = 0) {
  detail::require(scores.size() == truth.size(), ErrorCode::kDimensionMismatch,
                  "score and truth lengths differ");
  std::int64_t positives = 0;
  for (const auto t : truth) positives += t != 0;
  const auto negatives = static_cast<std::int64_t>(truth.size()) - positives;
  detail::require(positives > 0 && negatives > 0, ErrorCode::kDegenerate,
                  "validation truth holds a single class; sensitivity + specificity is "
                  "non-discriminative");

  auto candidates = threshold_candidates(grid, scores);
  detail::require(!candidates.empty(), ErrorCode::kDegenerate, "no threshold candidates");
  std::sort(candidates.begin(), candidates.end(), std::greater<>());

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Objective scaled by P * N stays an integer: tp * N + tn * P.
  std::int64_t best_key = -1;
  ThresholdSearchResult result;
  result.label_index = label_index;
  result.candidates_evaluated = candidates.size();
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::size_t next = 0;
  for (const double t : candidates) {
    while (next < order.size() && scores[order[next]] >= t) {
      if (truth[order[next]] != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++next;
    }
    const std::int64_t tn = negatives - fp;
    const std::int64_t key = tp * negatives + tn * positives;
    if (key > best_key) {
      best_key = key;
      result.tie_set.assign(1, t);
    } else if (key == best_key) {
      result.tie_set.push_back(t);
    }
  }
  result.chosen = result.tie_set.front();
  result.objective = static_cast<double>(best_key) /
                     (static_cast<double>(positives) * static_cast<double>(negatives));
  result.non_discriminative = best_key <= positives * negatives;
  return result;
}

// Independent search per label column.
inline std::vector<ThresholdSearchResult> search_all(const ScoreMatrix& scores,
                                                     const GroundTruthMatrix& truth,
                                                     const ThresholdGrid& grid) {
  const ScoreMatrix aligned = align(scores, truth);
  std::vector<ThresholdSearchResult> out;
  for (std::size_t k = 0; k < truth.label_count(); ++k) {
    const auto s = aligned.scores().column(k);
    const auto t = truth.truth().column(k);
    try {
      out.push_back(select_threshold(s, t, grid, k));
    } catch (const Error& e) {
      throw Error(e.code(), "label '" + truth.labels().name(k) + "': " + e.what());
    }
  }
  return out;
}

inline ThresholdVector select_all(const ScoreMatrix& scores, const GroundTruthMatrix& truth,
                                  const ThresholdGrid& grid) {
  std::vector<double> chosen;
  for (const auto& r : search_all(scores, truth, grid)) chosen.push_back(r.chosen);
  return ThresholdVector(std::move(chosen));
}

}  // namespace labeleval
