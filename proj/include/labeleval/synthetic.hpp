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

// Seeded synthetic score/label pairs with a known expected AUROC.
//
// Each label is Bernoulli(prevalence). A latent z is drawn from N(0, 1) for
// negatives and N(d, 1) for positives, where d is the separability, and the
// score is the logistic function of z. The logistic map is strictly
// increasing, so the expected AUROC is that of the binormal model:
//   AUROC(d) = Phi(d / sqrt(2)),   d(AUROC) = sqrt(2) * Phi^-1(AUROC).
// d = +inf gives positives a score of exactly 1 and disjoint supports.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "labeleval/core.hpp"
#include "labeleval/error.hpp"
#include "labeleval/random.hpp"

namespace labeleval {

struct SyntheticSpec {
  std::vector<double> prevalence;    // per label, in (0, 1)
  std::vector<double> separability;  // per label, >= 0, may be +inf
  std::size_t images = 0;
  std::uint64_t seed = 0;
  LabelSet labels;  // must have prevalence.size() entries
};

inline double expected_auroc(double separability) {
  if (std::isinf(separability)) return 1.0;
  const boost::math::normal standard;
  return boost::math::cdf(standard, separability / std::sqrt(2.0));
}

inline double separability_for_auroc(double auroc) {
  detail::require(auroc >= 0.5 && auroc <= 1.0, ErrorCode::kInvalidArgument,
                  "target AUROC must lie in [0.5, 1]");
  if (auroc == 1.0) return std::numeric_limits<double>::infinity();
  const boost::math::normal standard;
  return std::sqrt(2.0) * boost::math::quantile(standard, auroc);
}

inline std::pair<GroundTruthMatrix, ScoreMatrix> generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t k = spec.prevalence.size();
  detail::require(k > 0 && spec.separability.size() == k && spec.labels.size() == k,
                  ErrorCode::kDimensionMismatch,
                  "prevalence, separability and labels must have the same length");
  for (std::size_t j = 0; j < k; ++j) {
    const double p = spec.prevalence[j];
    detail::require(std::isfinite(p) && p > 0.0 && p < 1.0, ErrorCode::kInvalidArgument,
                    "prevalence must lie strictly inside (0, 1)");
    const double d = spec.separability[j];
    detail::require(!std::isnan(d) && d >= 0.0, ErrorCode::kInvalidArgument,
                    "separability must be non-negative");
  }

  Rng rng(spec.seed);
  std::vector<std::string> ids;
  ids.reserve(spec.images);
  BinaryMatrix truth(spec.images, k);
  RealMatrix scores(spec.images, k);
  char id[32];
  for (std::size_t i = 0; i < spec.images; ++i) {
    std::snprintf(id, sizeof id, "syn%06zu", i);
    ids.emplace_back(id);
    for (std::size_t j = 0; j < k; ++j) {
      const bool positive = rng.bernoulli(spec.prevalence[j]);
      const double z = rng.normal();
      const double d = spec.separability[j];
      double score = 0.0;
      if (positive && std::isinf(d)) {
        score = 1.0;
      } else {
        const double latent = positive ? z + d : z;
        score = 1.0 / (1.0 + std::exp(-latent));
        // Keep negatives strictly below the positives' point mass at 1.
        if (std::isinf(d)) score = std::min(score, std::nextafter(1.0, 0.0));
      }
      truth(i, j) = positive ? 1 : 0;
      scores(i, j) = score;
    }
  }
  return {GroundTruthMatrix(spec.labels, ids, std::move(truth)),
          ScoreMatrix(spec.labels, ids, std::move(scores))};
}

}  // namespace labeleval
