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

#include "labeleval/cohort_analysis.hpp"
#include "labeleval/fixtures.hpp"
#include "labeleval/random.hpp"

namespace labeleval {
namespace {

class StudyReport : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fixture_ = new fixtures::StudyFixture(fixtures::build_study_fixture());
    multi_ = new EvaluationReport(
        evaluate(fixture_->multi_label_scores, fixture_->test_truth, fixture_->thresholds));
    single_ = new EvaluationReport(
        evaluate(fixture_->single_label_scores, fixture_->test_truth, fixture_->thresholds));
  }
  static void TearDownTestSuite() {
    delete fixture_;
    delete multi_;
    delete single_;
  }

  static fixtures::StudyFixture* fixture_;
  static EvaluationReport* multi_;
  static EvaluationReport* single_;
};

fixtures::StudyFixture* StudyReport::fixture_ = nullptr;
EvaluationReport* StudyReport::multi_ = nullptr;
EvaluationReport* StudyReport::single_ = nullptr;

TEST_F(StudyReport, CountsMatchTheCountTable) {
  for (std::size_t k = 0; k < 4; ++k) {
    ConfusionCounts all;
    for (std::size_t c = 0; c <= 4; ++c) {
      const auto& expected = fixtures::kMultiLabelCounts.by_label[k][c];
      EXPECT_EQ(multi_->cell(std::to_string(c), multi_->labels.name(k))->counts, expected);
      all += expected;
    }
    EXPECT_EQ(multi_->cell("0-4", multi_->labels.name(k))->counts, all);
    EXPECT_EQ(single_->cell("0-4", single_->labels.name(k))->counts,
              fixtures::kSingleLabelCounts[k]);
  }
}

TEST_F(StudyReport, UacWholeSetCells) {
  const auto* uac = multi_->cell("0-4", "UAC");
  EXPECT_EQ(uac->specificity.value.value(), 1.0);
  EXPECT_FALSE(uac->specificity.interval->bounded());
  EXPECT_NEAR(uac->sensitivity.value.value(), 0.741, 0.0005);
  EXPECT_NEAR(*uac->sensitivity.interval->lower, 0.547, 0.001);
  EXPECT_NEAR(*uac->sensitivity.interval->upper, 0.871, 0.001);
}

TEST_F(StudyReport, ExactlyZeroHasNoPositives) {
  for (const auto& label : multi_->labels.names()) {
    const auto* cell = multi_->cell("0", label);
    EXPECT_FALSE(cell->sensitivity.value.defined());
    EXPECT_EQ(cell->sensitivity.reason, UndefinedReason::kNoPositives);
    EXPECT_FALSE(cell->average_precision->value.defined());
    EXPECT_EQ(cell->average_precision->reason, UndefinedReason::kNoPositives);
  }
}

TEST_F(StudyReport, ExactlyFourHasNoNegatives) {
  for (const auto& label : multi_->labels.names()) {
    const auto* cell = multi_->cell("4", label);
    EXPECT_FALSE(cell->specificity.value.defined());
    EXPECT_EQ(cell->specificity.reason, UndefinedReason::kNoNegatives);
    EXPECT_EQ(cell->auroc->reason, UndefinedReason::kNoNegatives);
  }
}

TEST_F(StudyReport, SelfConsistent) {
  EXPECT_TRUE(self_check(*multi_).empty());
  EXPECT_TRUE(self_check(*single_).empty());
  EXPECT_EQ(multi_->metadata.notes.front(), kPooledCaveat);
}

TEST_F(StudyReport, TamperedCountsAreDetected) {
  auto copy = *multi_;
  copy.cohorts[0].per_label[0].counts.tp += 1;
  copy.cohorts[0].per_label[0].counts.tn -= 1;
  EXPECT_FALSE(self_check(copy).empty());
  try {
    require_self_consistent(copy);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSelfCheck);
  }
}

TEST_F(StudyReport, CompareWithSelfIsZero) {
  const auto table = compare_networks(*multi_, *multi_);
  EXPECT_FALSE(table.rows.empty());
  for (const auto& r : table.rows) {
    if (r.delta) {
      EXPECT_EQ(*r.delta, 0.0);
    }
  }
}

TEST_F(StudyReport, CompareMultiWithSingleEttSpecificity) {
  const auto table = compare_networks(*multi_, *single_);
  const auto* row = table.find("0-4", "ETT", MetricKind::kSpecificity);
  ASSERT_NE(row, nullptr);
  EXPECT_NEAR(*row->a, 28.0 / 31.0, 1e-15);
  EXPECT_NEAR(*row->b, 22.0 / 31.0, 1e-15);
  EXPECT_NEAR(*row->delta, 22.0 / 31.0 - 28.0 / 31.0, 1e-15);
  EXPECT_NEAR(*row->b, 0.710, 0.0005);
}

TEST_F(StudyReport, CompareRejectsDifferentLabelSets) {
  auto other = *single_;
  other.labels = LabelSet({"A", "B", "C"});
  try {
    compare_networks(*multi_, other);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompatible);
  }
}

TEST_F(StudyReport, ReferenceCheckNotesDiscrepancies) {
  auto copy = *multi_;
  const std::vector<PublishedValue> published{
      {MetricKind::kSensitivity, "NGT", "0-4", 0.949},
      {MetricKind::kSpecificity, "ETT", "0-4", 0.967},
  };
  const auto notes_before = copy.metadata.notes.size();
  check_reference(copy, published);
  ASSERT_EQ(copy.reference_checks.size(), 2u);
  EXPECT_TRUE(copy.reference_checks[0].consistent);
  EXPECT_FALSE(copy.reference_checks[1].consistent);
  EXPECT_EQ(copy.metadata.notes.size(), notes_before + 1);
}

TEST(Evaluate, EmptyCohortIsUndefinedEverywhere) {
  // No image has exactly two labels.
  const std::vector<std::string> ids{"a", "b"};
  const GroundTruthMatrix truth(LabelSet({"A", "B"}), ids, BinaryMatrix(2, 2, {1, 0, 0, 0}));
  const ScoreMatrix scores(LabelSet({"A", "B"}), ids, RealMatrix(2, 2, {0.9, 0.1, 0.2, 0.3}));
  const auto report = evaluate(scores, truth, ThresholdVector({0.5, 0.5}));
  for (const auto& label : {"A", "B", "All"}) {
    const auto* cell = report.cell("2", label);
    for (const auto m : kAllMetrics) {
      const auto* mc = cell->metric(m);
      if (mc == nullptr) continue;
      EXPECT_FALSE(mc->value.defined());
      EXPECT_EQ(mc->reason, UndefinedReason::kEmptyCohort);
    }
  }
  EXPECT_TRUE(self_check(report).empty());
}

TEST(Evaluate, PropertyAdditivityAndSelfCheck) {
  Rng rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    const std::size_t k = 1 + rng.below(4);
    std::vector<std::string> ids, names;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("i" + std::to_string(i));
    for (std::size_t j = 0; j < k; ++j) names.push_back("L" + std::to_string(j));
    std::vector<std::uint8_t> t(n * k);
    std::vector<double> s(n * k);
    for (std::size_t i = 0; i < n * k; ++i) {
      t[i] = rng.bernoulli(0.5);
      s[i] = std::round(rng.uniform() * 20.0) / 20.0;
    }
    std::vector<double> thr(k);
    for (auto& v : thr) v = 0.05 + 0.9 * rng.uniform();
    const GroundTruthMatrix truth(LabelSet(names), ids, BinaryMatrix(n, k, t));
    const ScoreMatrix scores(LabelSet(names), ids, RealMatrix(n, k, s));
    const auto report = evaluate(scores, truth, ThresholdVector(thr));
    EXPECT_TRUE(self_check(report).empty());
    for (std::size_t j = 0; j < k; ++j) {
      ConfusionCounts sum;
      for (std::size_t c = 0; c <= k; ++c) sum += report.cell(std::to_string(c), names[j])->counts;
      EXPECT_EQ(sum, report.cell("0-" + std::to_string(k), names[j])->counts);
    }
  }
}

TEST(Evaluate, RejectsThresholdCountMismatch) {
  const std::vector<std::string> ids{"a"};
  const GroundTruthMatrix truth(LabelSet({"A", "B"}), ids, BinaryMatrix(1, 2, {1, 0}));
  const ScoreMatrix scores(LabelSet({"A", "B"}), ids, RealMatrix(1, 2, {0.9, 0.1}));
  EXPECT_THROW(evaluate(scores, truth, ThresholdVector({0.5})), Error);
}

}  // namespace
}  // namespace labeleval
