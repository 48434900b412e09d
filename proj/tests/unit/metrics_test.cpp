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

#include "labeleval/intervals.hpp"
#include "labeleval/metrics.hpp"
#include "labeleval/random.hpp"
#include "support/oracles.hpp"

namespace labeleval {
namespace {

TEST(Confusion, HandExample) {
  const std::vector<std::uint8_t> truth{1, 1, 0, 0};
  const std::vector<std::uint8_t> pred{1, 0, 1, 0};
  EXPECT_EQ(confusion(truth, pred), (ConfusionCounts{1, 1, 1, 1}));
}

TEST(Confusion, IdenticalVectorsHaveNoErrors) {
  const std::vector<std::uint8_t> v{1, 0, 1, 1, 0};
  const auto c = confusion(v, v);
  EXPECT_EQ(c.fp, 0);
  EXPECT_EQ(c.fn, 0);
}

TEST(Confusion, LengthMismatch) {
  const std::vector<std::uint8_t> a{1, 0};
  const std::vector<std::uint8_t> b{1};
  EXPECT_THROW(confusion(a, b), Error);
}

TEST(Confusion, PropertyCountsSumToN) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = rng.below(50);
    std::vector<std::uint8_t> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = rng.bernoulli(0.5);
      p[i] = rng.bernoulli(0.5);
    }
    const auto c = confusion(t, p);
    EXPECT_EQ(c.total(), static_cast<std::int64_t>(n));
  }
}

TEST(Sensitivity, PublishedValues) {
  EXPECT_NEAR(sensitivity({0, 0, 3, 56}).value(), 0.949, 0.0005);
  EXPECT_NEAR(sensitivity({0, 0, 7, 20}).value(), 0.741, 0.0005);
  EXPECT_FALSE(sensitivity({5, 2, 0, 0}).defined());
}

TEST(Specificity, PublishedValues) {
  EXPECT_NEAR(specificity({17, 2, 0, 0}).value(), 0.895, 0.0005);
  EXPECT_NEAR(specificity({26, 7, 0, 0}).value(), 0.788, 0.0005);
  EXPECT_FALSE(specificity({0, 0, 3, 4}).defined());
}

TEST(Precision, Values) {
  EXPECT_NEAR(precision({0, 2, 0, 56}).value(), 56.0 / 58.0, 1e-15);
  EXPECT_NEAR(precision({0, 2, 0, 56}).value(), 0.9655, 0.00005);
  EXPECT_FALSE(precision({3, 0, 4, 0}).defined());
  EXPECT_EQ(precision({0, 0, 0, 5}).value(), 1.0);
}

TEST(MetricValue, UndefinedValueThrows) {
  try {
    MetricValue::undefined().value();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefined);
  }
}

TEST(MetricValue, PropertyRatiosStayInUnitInterval) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const ConfusionCounts c{static_cast<std::int64_t>(rng.below(20)),
                            static_cast<std::int64_t>(rng.below(20)),
                            static_cast<std::int64_t>(rng.below(20)),
                            static_cast<std::int64_t>(rng.below(20))};
    for (const auto& m : {sensitivity(c), specificity(c), precision(c), hamming_loss(c)}) {
      if (!m.defined()) {
        EXPECT_EQ(m.denominator(), 0);
        continue;
      }
      EXPECT_GE(m.value(), 0.0);
      EXPECT_LE(m.value(), 1.0);
    }
  }
}

TEST(HammingLoss, UvcColumn) {
  // 78 decisions with 7 false positives and no misses.
  const auto h = hamming_loss(ConfusionCounts{26, 7, 0, 45});
  EXPECT_EQ(h.numerator(), 7);
  EXPECT_EQ(h.denominator(), 78);
  EXPECT_NEAR(h.value(), 0.090, 0.0005);
}

TEST(HammingLoss, MatrixScopes) {
  const BinaryMatrix truth(2, 2, {1, 0, 0, 1});
  const BinaryMatrix none(2, 2, {0, 0, 0, 0});
  EXPECT_EQ(hamming_loss(truth, none).value(), 0.5);
  EXPECT_EQ(hamming_loss(truth, truth).value(), 0.0);
  EXPECT_EQ(hamming_loss(truth, none, 0).value(), 0.5);
}

TEST(HammingLoss, WholeMatrixIsMeanOfColumnsProperty) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    const std::size_t k = 1 + rng.below(5);
    std::vector<std::uint8_t> a(n * k), b(n * k);
    for (std::size_t i = 0; i < n * k; ++i) {
      a[i] = rng.bernoulli(0.5);
      b[i] = rng.bernoulli(0.5);
    }
    const BinaryMatrix ta(n, k, a), tb(n, k, b);
    std::int64_t wrong = 0;
    for (std::size_t c = 0; c < k; ++c) wrong += hamming_loss(ta, tb, c).numerator();
    EXPECT_EQ(hamming_loss(ta, tb).numerator(), wrong);
  }
}

struct IntervalCase {
  std::int64_t s, n;
  double lo, hi;
};

TEST(LogitInterval, PublishedBounds) {
  const IntervalCase cases[] = {{56, 59, 0.854, 0.984},
                                {20, 27, 0.547, 0.871},
                                {26, 33, 0.617, 0.895},
                                {7, 78, 0.043, 0.176}};
  for (const auto& c : cases) {
    const auto est = logit_interval(c.s, c.n);
    ASSERT_TRUE(est.bounded());
    EXPECT_NEAR(*est.lower, c.lo, 0.001) << c.s << "/" << c.n;
    EXPECT_NEAR(*est.upper, c.hi, 0.001) << c.s << "/" << c.n;
  }
}

TEST(LogitInterval, DegenerateEndpoints) {
  const auto all = logit_interval(27, 27);
  EXPECT_EQ(all.point, 1.0);
  EXPECT_FALSE(all.lower.has_value());
  EXPECT_FALSE(all.upper.has_value());
  const auto none = interval_for_metric(MetricValue::ratio(0, 12));
  EXPECT_EQ(none.point, 0.0);
  EXPECT_FALSE(none.bounded());
}

TEST(LogitInterval, InvalidInputs) {
  EXPECT_THROW(logit_interval(0, 0), Error);
  EXPECT_THROW(logit_interval(5, 4), Error);
  EXPECT_THROW(logit_interval(-1, 4), Error);
  EXPECT_THROW(logit_interval(1, 4, 1.0), Error);
  EXPECT_THROW(interval_for_metric(MetricValue::undefined()), Error);
  EXPECT_THROW(interval_for_metric(MetricValue::real(0.5)), Error);
}

TEST(LogitInterval, MatchesOracleProperty) {
  Rng rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = static_cast<std::int64_t>(1 + rng.below(500));
    const auto s = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n) + 1));
    const double conf = 0.5 + 0.49 * rng.uniform();
    const auto est = logit_interval(s, n, conf);
    const auto ref = oracle::logit_interval(s, n, conf);
    EXPECT_EQ(est.bounded(), ref.lower.has_value());
    if (!est.bounded()) continue;
    EXPECT_NEAR(*est.lower, *ref.lower, 1e-9);
    EXPECT_NEAR(*est.upper, *ref.upper, 1e-9);
    EXPECT_LT(*est.lower, est.point);
    EXPECT_GT(*est.upper, est.point);
    EXPECT_GT(*est.lower, 0.0);
    EXPECT_LT(*est.upper, 1.0);
  }
}

TEST(LogitInterval, WidensWithConfidence) {
  const auto a = logit_interval(30, 50, 0.90);
  const auto b = logit_interval(30, 50, 0.99);
  EXPECT_LT(*b.lower, *a.lower);
  EXPECT_GT(*b.upper, *a.upper);
}

}  // namespace
}  // namespace labeleval
