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

// Count-realizing study fixtures.
//
// The dataset, validation and test files are built from published summary
// counts only: label-cardinality histograms and per-label totals for each
// partition, per-cohort TN/FP/FN/TP for the test set, and the per-label
// thresholds. Scores are placed on the correct side of the thresholds so the
// confusion counts are reproduced exactly; their ranks are invented.
//
// Scores are multiples of 1e-4 so they survive a text round-trip unchanged.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "labeleval/cohort_analysis.hpp"
#include "labeleval/core.hpp"
#include "labeleval/error.hpp"
#include "labeleval/lam.hpp"
#include "labeleval/random.hpp"

namespace labeleval::fixtures {

inline constexpr std::uint64_t kDefaultSeed = 20260417;
inline constexpr std::size_t kLabels = 4;

// Builds a 0/1 matrix with the given row and column sums (Ryser's greedy:
// rows in decreasing order take the columns with the most remaining demand).
inline BinaryMatrix realize_margins(std::span<const std::size_t> row_sums,
                                    std::span<const std::size_t> col_sums) {
  const std::size_t rows = row_sums.size();
  const std::size_t cols = col_sums.size();
  detail::require(std::accumulate(row_sums.begin(), row_sums.end(), std::size_t{0}) ==
                      std::accumulate(col_sums.begin(), col_sums.end(), std::size_t{0}),
                  ErrorCode::kInvalidArgument, "row and column sums differ");
  BinaryMatrix m(rows, cols, 0);
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return row_sums[a] > row_sums[b]; });
  std::vector<std::size_t> remaining(col_sums.begin(), col_sums.end());
  for (const std::size_t r : order) {
    std::vector<std::size_t> by_demand(cols);
    std::iota(by_demand.begin(), by_demand.end(), std::size_t{0});
    std::stable_sort(by_demand.begin(), by_demand.end(),
                     [&](std::size_t a, std::size_t b) { return remaining[a] > remaining[b]; });
    detail::require(row_sums[r] <= cols, ErrorCode::kInvalidArgument, "row sum exceeds width");
    for (std::size_t i = 0; i < row_sums[r]; ++i) {
      const std::size_t c = by_demand[i];
      detail::require(remaining[c] > 0, ErrorCode::kInvalidArgument, "margins are not realizable");
      m(r, c) = 1;
      --remaining[c];
    }
  }
  return m;
}

// Label-cardinality histogram (images with 0..4 positive labels) and
// per-label positive totals for one partition.
struct PartitionMargins {
  std::array<std::size_t, kLabels + 1> cardinality{};
  std::array<std::size_t, kLabels> label_totals{};

  std::size_t images() const {
    return std::accumulate(cardinality.begin(), cardinality.end(), std::size_t{0});
  }
};

inline constexpr PartitionMargins kTrainingMargins{{38, 138, 198, 126, 129}, {490, 367, 219, 352}};
inline constexpr PartitionMargins kValidationMargins{{4, 16, 22, 13, 15}, {56, 45, 21, 37}};
inline constexpr PartitionMargins kTestingMargins{{7, 13, 24, 19, 15}, {59, 47, 27, 45}};

inline constexpr std::array<double, kLabels> kThresholds{0.8, 0.2, 0.8, 0.75};
inline constexpr std::array<int, kLabels> kThresholdTicks{8000, 2000, 8000, 7500};

// Test-set confusion counts indexed [label][cardinality]. The UVC row is
// arranged to sum to the whole-set column (26/7/0/45).
struct CohortCounts {
  std::array<std::array<ConfusionCounts, kLabels + 1>, kLabels> by_label;
};

inline constexpr CohortCounts kMultiLabelCounts{{{
    // NGT
    {{{6, 1, 0, 0}, {5, 0, 0, 8}, {5, 0, 1, 18}, {1, 1, 1, 16}, {0, 0, 1, 14}}},
    // ETT
    {{{7, 0, 0, 0}, {11, 2, 0, 0}, {8, 1, 2, 13}, {2, 0, 1, 16}, {0, 0, 1, 14}}},
    // UAC
    {{{7, 0, 0, 0}, {13, 0, 0, 0}, {20, 0, 2, 2}, {11, 0, 3, 5}, {0, 0, 2, 13}}},
    // UVC
    {{{6, 1, 0, 0}, {8, 0, 0, 5}, {12, 2, 0, 10}, {0, 4, 0, 15}, {0, 0, 0, 15}}},
}}};

// Whole-test-set counts of the independent single-label networks.
inline constexpr std::array<ConfusionCounts, kLabels> kSingleLabelCounts{{
    {16, 3, 1, 58},
    {22, 9, 1, 46},
    {50, 1, 4, 23},
    {26, 7, 4, 41},
}};

// Published values for the multi-label network (">1" and "0-4" columns) and
// the single-label networks ("0-4" only). Rank metrics are omitted because
// the fixture's rank order is invented.
inline std::vector<PublishedValue> multi_label_reference() {
  const std::array<std::string, kLabels + 1> rows{"NGT", "ETT", "UAC", "UVC", "All"};
  const double sens[2][5] = {{0.941, 0.915, 0.741, 0.950, 0.903},
                             {0.949, 0.915, 0.741, 0.956, 0.910}};
  const double spec[2][5] = {{0.857, 1.0, 1.0, 0.667, 0.896}, {0.895, 0.967, 1.0, 0.788, 0.925}};
  const double ham[2][5] = {{0.035, 0.138, 0.069, 0.103, 0.086},
                            {0.039, 0.115, 0.051, 0.090, 0.074}};
  const char* cohorts[2] = {">1", "0-4"};
  std::vector<PublishedValue> out;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out.push_back({MetricKind::kSensitivity, rows[k], cohorts[c], sens[c][k]});
      out.push_back({MetricKind::kSpecificity, rows[k], cohorts[c], spec[c][k]});
      out.push_back({MetricKind::kHammingLoss, rows[k], cohorts[c], ham[c][k]});
    }
  }
  return out;
}

inline std::vector<PublishedValue> single_label_reference() {
  const std::array<std::string, kLabels + 1> rows{"NGT", "ETT", "UAC", "UVC", "All"};
  const double sens[5] = {0.947, 0.867, 0.500, 0.911, 0.896};
  const double spec[5] = {0.842, 0.710, 0.980, 0.788, 0.851};
  const double ham[5] = {0.051, 0.128, 0.064, 0.141, 0.097};
  std::vector<PublishedValue> out;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.push_back({MetricKind::kSensitivity, rows[k], "0-4", sens[k]});
    out.push_back({MetricKind::kSpecificity, rows[k], "0-4", spec[k]});
    out.push_back({MetricKind::kHammingLoss, rows[k], "0-4", ham[k]});
  }
  return out;
}

struct StudyFixture {
  GroundTruthMatrix dataset;  // all 777 images
  SplitAssignment split;
  GroundTruthMatrix validation_truth;
  ScoreMatrix validation_scores;
  GroundTruthMatrix test_truth;
  ScoreMatrix multi_label_scores;
  ScoreMatrix single_label_scores;
  ThresholdVector thresholds;
  FeatureMapDump lam_features;
  HeadWeights lam_weights;
  GrayImage lam_base;
};

namespace detail {

inline double tick(int t) { return static_cast<double>(t) / 10000.0; }

inline int draw_tick(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

inline std::vector<std::size_t> row_sums_from(const PartitionMargins& m) {
  std::vector<std::size_t> rows;
  for (std::size_t c = 0; c <= kLabels; ++c) rows.insert(rows.end(), m.cardinality[c], c);
  return rows;
}

inline BinaryMatrix shuffled_rows(const BinaryMatrix& m, Rng& rng) {
  std::vector<std::size_t> order(m.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order.begin(), order.end());
  BinaryMatrix out(m.rows(), m.cols(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(order[r], c);
  }
  return out;
}

inline BinaryMatrix partition_truth(const PartitionMargins& m, Rng& rng) {
  const auto rows = row_sums_from(m);
  return shuffled_rows(realize_margins(rows, m.label_totals), rng);
}

// Test truth realized cohort by cohort so each cohort's per-label positives
// equal tp + fn from the count table.
inline BinaryMatrix test_truth(Rng& rng) {
  std::vector<std::uint8_t> data;
  for (std::size_t c = 0; c <= kLabels; ++c) {
    const std::size_t n = kTestingMargins.cardinality[c];
    std::vector<std::size_t> rows(n, c);
    std::vector<std::size_t> cols(kLabels);
    for (std::size_t k = 0; k < kLabels; ++k) {
      const auto& counts = kMultiLabelCounts.by_label[k][c];
      labeleval::detail::require(static_cast<std::size_t>(counts.total()) == n,
                                 ErrorCode::kInvalidArgument, "cohort counts do not match size");
      cols[k] = static_cast<std::size_t>(counts.positives());
    }
    const auto block = realize_margins(rows, cols);
    data.insert(data.end(), block.data().begin(), block.data().end());
  }
  return shuffled_rows(BinaryMatrix(kTestingMargins.images(), kLabels, std::move(data)), rng);
}

// Scores one label column so that exactly `tp` positives and `fp` negatives
// among `rows` land at or above the threshold.
inline void place_scores(const BinaryMatrix& truth, std::size_t k,
                         std::span<const std::size_t> rows, std::int64_t tp, std::int64_t fp,
                         int threshold_tick, Rng& rng, RealMatrix& scores) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (const auto r : rows) (truth(r, k) ? pos : neg).push_back(r);
  rng.shuffle(pos.begin(), pos.end());
  rng.shuffle(neg.begin(), neg.end());
  const auto above = [&] { return tick(draw_tick(rng, threshold_tick, 9990)); };
  const auto below = [&] { return tick(draw_tick(rng, 10, threshold_tick - 10)); };
  for (std::size_t i = 0; i < pos.size(); ++i) {
    scores(pos[i], k) = static_cast<std::int64_t>(i) < tp ? above() : below();
  }
  for (std::size_t i = 0; i < neg.size(); ++i) {
    scores(neg[i], k) = static_cast<std::int64_t>(i) < fp ? above() : below();
  }
}

// Validation scores: positives at or above the threshold, negatives at
// least 0.04 below it, one boundary case on each side so the 0.05 grid has a
// unique optimum, and one far outlier per class that no grid point can fix.
inline RealMatrix validation_scores(const BinaryMatrix& truth, Rng& rng) {
  RealMatrix scores(truth.rows(), truth.cols(), 0.0);
  for (std::size_t k = 0; k < truth.cols(); ++k) {
    const int t = kThresholdTicks[k];
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t r = 0; r < truth.rows(); ++r) (truth(r, k) ? pos : neg).push_back(r);
    rng.shuffle(pos.begin(), pos.end());
    rng.shuffle(neg.begin(), neg.end());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      int v = draw_tick(rng, t, 9990);
      if (i == 0) v = t;
      if (i == 1 && pos.size() >= 3) v = 100;
      scores(pos[i], k) = tick(v);
    }
    for (std::size_t i = 0; i < neg.size(); ++i) {
      int v = draw_tick(rng, 10, t - 400);
      if (i == 0) v = t - 400;
      if (i == 1 && neg.size() >= 3) v = 9950;
      scores(neg[i], k) = tick(v);
    }
  }
  return scores;
}

inline std::vector<std::string> ids_of(const SplitAssignment& split, Partition p) {
  return split.members(p);
}

inline FeatureMapDump lam_features(const std::string& source_id) {
  FeatureMapDump f;
  f.channels = 4;
  f.height = 7;
  f.width = 7;
  f.source_image_id = source_id;
  f.source_height = 56;
  f.source_width = 56;
  const double centers[4][2] = {{1.5, 3.0}, {1.0, 4.0}, {5.0, 2.5}, {5.5, 3.5}};
  for (std::size_t c = 0; c < f.channels; ++c) {
    for (std::size_t y = 0; y < f.height; ++y) {
      for (std::size_t x = 0; x < f.width; ++x) {
        const double dy = static_cast<double>(y) - centers[c][0];
        const double dx = static_cast<double>(x) - centers[c][1];
        f.data.push_back(static_cast<float>(std::exp(-(dx * dx + dy * dy) / 4.0)));
      }
    }
  }
  return f;
}

inline HeadWeights lam_weights() {
  HeadWeights h;
  h.labels = 4;
  h.channels = 4;
  h.label_names = {"NGT", "ETT", "UAC", "UVC"};
  h.weights = {1.25f, 0.25f, -0.5f, 0.0f,  //
               0.25f, 1.5f, 0.0f, -0.25f,  //
               -0.5f, 0.0f, 1.0f, 0.5f,    //
               0.0f, -0.25f, 0.5f, 1.125f};
  return h;
}

inline GrayImage lam_base() {
  GrayImage img;
  img.width = 56;
  img.height = 56;
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      const double dx = static_cast<double>(x) - 27.5;
      const double dy = static_cast<double>(y) - 30.0;
      const bool body = (dx * dx) / (18.0 * 18.0) + (dy * dy) / (24.0 * 24.0) <= 1.0;
      img.pixels.push_back(static_cast<std::uint8_t>(body ? 150 + (y * 60) / 56 : 20 + x / 4));
    }
  }
  return img;
}

}  // namespace detail

inline StudyFixture build_study_fixture(std::uint64_t seed = kDefaultSeed) {
  Rng rng(seed);
  const LabelSet labels;
  std::vector<std::string> all_ids;
  for (std::size_t i = 1; i <= 777; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "cxr%04zu", i);
    all_ids.emplace_back(buf);
  }

  StudyFixture f;
  f.split = split_dataset(all_ids, {kTrainingMargins.images(), kValidationMargins.images(),
                                    kTestingMargins.images()},
                          seed);
  const auto training = detail::partition_truth(kTrainingMargins, rng);
  const auto validation = detail::partition_truth(kValidationMargins, rng);
  const auto testing = detail::test_truth(rng);

  // Dataset rows follow id order; each partition consumes its own rows in turn.
  BinaryMatrix dataset(all_ids.size(), kLabels, 0);
  std::array<std::size_t, 3> cursor{};
  const BinaryMatrix* parts[3] = {&training, &validation, &testing};
  for (std::size_t i = 0; i < all_ids.size(); ++i) {
    const auto p = static_cast<std::size_t>(f.split.partitions()[i]);
    for (std::size_t k = 0; k < kLabels; ++k) dataset(i, k) = (*parts[p])(cursor[p], k);
    ++cursor[p];
  }
  f.dataset = GroundTruthMatrix(labels, all_ids, dataset);

  f.validation_truth =
      GroundTruthMatrix(labels, detail::ids_of(f.split, Partition::kValidation), validation);
  f.validation_scores = ScoreMatrix(labels, f.validation_truth.image_ids(),
                                    detail::validation_scores(validation, rng));

  const auto test_ids = detail::ids_of(f.split, Partition::kTesting);
  f.test_truth = GroundTruthMatrix(labels, test_ids, testing);

  RealMatrix multi(testing.rows(), kLabels, 0.0);
  for (std::size_t k = 0; k < kLabels; ++k) {
    for (std::size_t c = 0; c <= kLabels; ++c) {
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < testing.rows(); ++r) {
        if (f.test_truth.cardinality(r) == c) rows.push_back(r);
      }
      const auto& counts = kMultiLabelCounts.by_label[k][c];
      detail::place_scores(testing, k, rows, counts.tp, counts.fp, kThresholdTicks[k], rng, multi);
    }
  }
  f.multi_label_scores = ScoreMatrix(labels, test_ids, multi);

  RealMatrix single(testing.rows(), kLabels, 0.0);
  std::vector<std::size_t> every(testing.rows());
  std::iota(every.begin(), every.end(), std::size_t{0});
  for (std::size_t k = 0; k < kLabels; ++k) {
    const auto& counts = kSingleLabelCounts[k];
    detail::place_scores(testing, k, every, counts.tp, counts.fp, kThresholdTicks[k], rng, single);
  }
  f.single_label_scores = ScoreMatrix(labels, test_ids, single);

  f.thresholds = ThresholdVector(std::vector<double>(kThresholds.begin(), kThresholds.end()));
  f.lam_features = detail::lam_features(test_ids.front());
  f.lam_weights = detail::lam_weights();
  f.lam_base = detail::lam_base();
  return f;
}

}  // namespace labeleval::fixtures
