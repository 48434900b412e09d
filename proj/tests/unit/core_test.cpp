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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "labeleval/core.hpp"
#include "labeleval/fixtures.hpp"
#include "labeleval/random.hpp"

namespace labeleval {
namespace {

ScoreMatrix make_scores(std::vector<std::string> ids, std::size_t k, std::vector<double> v) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back("L" + std::to_string(i));
  const auto n = ids.size();
  return ScoreMatrix(LabelSet(names), std::move(ids), RealMatrix(n, k, std::move(v)));
}

TEST(LabelSet, DefaultIsTheFourCatheterLabels) {
  const LabelSet labels;
  EXPECT_EQ(labels.names(), (std::vector<std::string>{"NGT", "ETT", "UAC", "UVC"}));
  EXPECT_EQ(labels.index_of("UAC"), 2u);
  EXPECT_FALSE(labels.index_of("XYZ").has_value());
}

TEST(LabelSet, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(LabelSet({"A", "A"}), Error);
  EXPECT_THROW(LabelSet(std::vector<std::string>{}), Error);
  EXPECT_THROW(LabelSet({""}), Error);
}

TEST(GroundTruth, ValidatesShapeCellsAndIds) {
  EXPECT_THROW(GroundTruthMatrix(LabelSet({"A"}), {"x", "y"}, BinaryMatrix(1, 1, 0)), Error);
  EXPECT_THROW(GroundTruthMatrix(LabelSet({"A"}), {"x"}, BinaryMatrix(1, 1, 2)), Error);
  EXPECT_THROW(GroundTruthMatrix(LabelSet({"A"}), {"x", "x"}, BinaryMatrix(2, 1, 0)), Error);
  const GroundTruthMatrix t(LabelSet({"A", "B"}), {"x", "y"}, BinaryMatrix(2, 2, {1, 1, 0, 1}));
  EXPECT_EQ(t.cardinality(0), 2u);
  EXPECT_EQ(t.cardinality(1), 1u);
  EXPECT_EQ(t.positives(1), 2u);
}

TEST(ScoreMatrix, RejectsOutOfRangeAndNonFinite) {
  EXPECT_THROW(make_scores({"a"}, 1, {1.5}), Error);
  EXPECT_THROW(make_scores({"a"}, 1, {-0.1}), Error);
  try {
    make_scores({"a"}, 1, {std::nan("")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
}

TEST(ThresholdVector, OpenUnitInterval) {
  EXPECT_THROW(ThresholdVector({0.0}), Error);
  EXPECT_THROW(ThresholdVector({1.0}), Error);
  EXPECT_NO_THROW(ThresholdVector({0.05, 0.95}));
}

TEST(Binarize, InclusiveBoundary) {
  const auto s = make_scores({"a"}, 1, {0.8});
  EXPECT_EQ(binarize(s, ThresholdVector({0.8}))(0, 0), 1);
}

TEST(Binarize, AllZeroScoresGiveNoPositives) {
  const auto s = make_scores({"a", "b"}, 2, {0.0, 0.0, 0.0, 0.0});
  const auto p = binarize(s, ThresholdVector({0.01, 0.5}));
  EXPECT_TRUE(std::all_of(p.data().begin(), p.data().end(), [](auto v) { return v == 0; }));
}

TEST(Binarize, HandExample) {
  const auto s = make_scores({"a", "b"}, 2, {0.9, 0.1, 0.5, 0.75});
  const auto p = binarize(s, ThresholdVector({0.8, 0.75}));
  EXPECT_EQ(p, PredictionMatrix(2, 2, {1, 0, 0, 1}));
}

TEST(Binarize, ThresholdCountMismatch) {
  const auto s = make_scores({"a"}, 2, {0.9, 0.1});
  EXPECT_THROW(binarize(s, ThresholdVector({0.5})), Error);
}

TEST(Align, ReordersScoresToTruthOrder) {
  const GroundTruthMatrix t(LabelSet({"L0"}), {"b", "a"}, BinaryMatrix(2, 1, {1, 0}));
  const auto s = make_scores({"a", "b"}, 1, {0.1, 0.9});
  const auto aligned = align(s, t);
  EXPECT_EQ(aligned.image_ids(), t.image_ids());
  EXPECT_EQ(aligned.scores()(0, 0), 0.9);
}

TEST(Align, MissingIdIsMisaligned) {
  const GroundTruthMatrix t(LabelSet({"L0"}), {"c"}, BinaryMatrix(1, 1, {1}));
  const auto s = make_scores({"a"}, 1, {0.1});
  try {
    align(s, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMisaligned);
  }
}

std::vector<std::string> numbered_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("id" + std::to_string(i));
  return ids;
}

TEST(Split, TableOneSizes) {
  const auto ids = numbered_ids(777);
  const auto s = split_dataset(ids, {629, 70, 78}, 7);
  EXPECT_EQ(s.counts(), (SplitCounts{629, 70, 78}));
}

TEST(Split, AllTraining) {
  const auto ids = numbered_ids(10);
  const auto s = split_dataset(ids, {10, 0, 0}, 1);
  EXPECT_EQ(s.members(Partition::kTraining).size(), 10u);
}

TEST(Split, DeterministicPerSeedAndSeedSensitive) {
  const auto ids = numbered_ids(200);
  EXPECT_EQ(split_dataset(ids, {150, 25, 25}, 3), split_dataset(ids, {150, 25, 25}, 3));
  EXPECT_NE(split_dataset(ids, {150, 25, 25}, 3).partitions(),
            split_dataset(ids, {150, 25, 25}, 4).partitions());
}

TEST(Split, CountMismatchThrows) {
  const auto ids = numbered_ids(5);
  EXPECT_THROW(split_dataset(ids, {1, 1, 1}, 0), Error);
}

TEST(Split, PropertyDisjointCover) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    const std::size_t a = rng.below(n + 1);
    const std::size_t b = rng.below(n - a + 1);
    const auto ids = numbered_ids(n);
    const auto s = split_dataset(ids, {a, b, n - a - b}, rng.next());
    std::set<std::string> seen;
    for (const auto p : {Partition::kTraining, Partition::kValidation, Partition::kTesting}) {
      for (const auto& id : s.members(p)) EXPECT_TRUE(seen.insert(id).second);
    }
    EXPECT_EQ(seen.size(), n);
    EXPECT_EQ(s.counts(), (SplitCounts{a, b, n - a - b}));
  }
}

TEST(Cohorts, TestSetSizesFromFixture) {
  const auto f = fixtures::build_study_fixture();
  const std::size_t expected[] = {7, 13, 24, 19, 15};
  for (std::size_t c = 0; c <= 4; ++c) {
    EXPECT_EQ(cohort_by_cardinality(f.test_truth, CohortSelector::exactly(c)).rows.size(),
              expected[c]);
  }
  EXPECT_EQ(cohort_by_cardinality(f.test_truth, CohortSelector::more_than_one()).rows.size(), 58u);
  EXPECT_EQ(cohort_by_cardinality(f.test_truth, CohortSelector::all()).rows.size(), 78u);
}

TEST(Cohorts, AllZeroTruthIsExactlyZero) {
  const GroundTruthMatrix t(LabelSet(), {"a", "b", "c"}, BinaryMatrix(3, 4, 0));
  EXPECT_EQ(cohort_by_cardinality(t, CohortSelector::exactly(0)).rows.size(), 3u);
}

TEST(Cohorts, CardinalityAboveLabelCountThrows) {
  const GroundTruthMatrix t(LabelSet(), {"a"}, BinaryMatrix(1, 4, 0));
  EXPECT_THROW(cohort_by_cardinality(t, CohortSelector::exactly(5)), Error);
}

TEST(Cohorts, PropertyExactlyPartitionsAll) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    const std::size_t k = 1 + rng.below(5);
    std::vector<std::uint8_t> cells(n * k);
    for (auto& c : cells) c = rng.bernoulli(0.4);
    const GroundTruthMatrix t(LabelSet(std::vector<std::string>(
                                  [&] {
                                    std::vector<std::string> v;
                                    for (std::size_t i = 0; i < k; ++i) v.push_back("L" + std::to_string(i));
                                    return v;
                                  }())),
                              numbered_ids(n), BinaryMatrix(n, k, cells));
    std::size_t total = 0;
    std::size_t multi = 0;
    for (std::size_t c = 0; c <= k; ++c) {
      const auto size = cohort_by_cardinality(t, CohortSelector::exactly(c)).rows.size();
      total += size;
      if (c > 1) multi += size;
    }
    EXPECT_EQ(total, n);
    EXPECT_EQ(multi, cohort_by_cardinality(t, CohortSelector::more_than_one()).rows.size());
  }
}

TEST(Cohorts, SelectorNamesAndParse) {
  EXPECT_EQ(CohortSelector::exactly(3).name(4), "3");
  EXPECT_EQ(CohortSelector::more_than_one().name(4), ">1");
  EXPECT_EQ(CohortSelector::all().name(4), "0-4");
  EXPECT_EQ(CohortSelector::parse("0-4", 4), CohortSelector::all());
  EXPECT_EQ(CohortSelector::parse("All", 4), CohortSelector::all());
  EXPECT_EQ(CohortSelector::parse("2", 4), CohortSelector::exactly(2));
  EXPECT_FALSE(CohortSelector::parse("x", 4).has_value());
}

TEST(Fixture, DatasetColumnSumsMatchTableOne) {
  const auto f = fixtures::build_study_fixture();
  EXPECT_EQ(f.dataset.size(), 777u);
  EXPECT_EQ(f.dataset.positives(0), 605u);
  EXPECT_EQ(f.dataset.positives(1), 459u);
  EXPECT_EQ(f.dataset.positives(2), 267u);
  EXPECT_EQ(f.dataset.positives(3), 434u);
}

TEST(Fixture, RealizeMarginsProperty) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    // Draw a random matrix and ask the realizer to reproduce its margins.
    const std::size_t n = 1 + rng.below(30);
    const std::size_t k = 1 + rng.below(5);
    std::vector<std::size_t> rows(n, 0);
    std::vector<std::size_t> cols(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (rng.bernoulli(0.5)) {
          ++rows[i];
          ++cols[j];
        }
      }
    }
    const auto m = fixtures::realize_margins(rows, cols);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t s = 0;
      for (std::size_t j = 0; j < k; ++j) s += m(i, j);
      EXPECT_EQ(s, rows[i]);
    }
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += m(i, j);
      EXPECT_EQ(s, cols[j]);
    }
  }
}

}  // namespace
}  // namespace labeleval
