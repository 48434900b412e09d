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

#include "labeleval/fixtures.hpp"
#include "labeleval/io/svg.hpp"

namespace labeleval::io {
namespace {

std::size_t count(const std::string& s, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Svg, FourLabelPanelsWithAnnotations) {
  const auto f = fixtures::build_study_fixture();
  const auto panels =
      cohort_curve_panels(f.multi_label_scores, f.test_truth, CurveKind::kPrecisionRecall);
  ASSERT_EQ(panels.size(), 4u);
  const auto svg = emit_curves(panels);
  EXPECT_TRUE(svg.starts_with("<?xml"));
  EXPECT_NE(svg.find("width=\"600.00\" height=\"600.00\""), std::string::npos);
  EXPECT_EQ(count(svg, "<polyline"), 8u);
  EXPECT_EQ(count(svg, " AP="), 8u);
  EXPECT_EQ(count(svg, "stroke-dasharray=\"8,3,2,3\""), 4u);
  for (const auto& name : f.test_truth.labels().names()) {
    EXPECT_NE(svg.find(">" + name + "</text>"), std::string::npos) << name;
  }
  EXPECT_EQ(emit_curves(panels), svg);
}

TEST(Svg, RocPanelsCarryAuroc) {
  const auto f = fixtures::build_study_fixture();
  const auto svg =
      emit_curves(cohort_curve_panels(f.multi_label_scores, f.test_truth, CurveKind::kRoc));
  EXPECT_EQ(count(svg, " AUROC="), 8u);
  EXPECT_EQ(count(svg, " AP="), 0u);
}

TEST(Svg, ThresholdTracesAreDottedGrey) {
  const auto f = fixtures::build_study_fixture();
  const auto svg = emit_curves(threshold_trace_panels(f.validation_scores, f.validation_truth));
  EXPECT_EQ(count(svg, "stroke=\"#888888\""), 4u);
}

TEST(Svg, SinglePanelUsesOneColumn) {
  PlotPanel p{"A", "x", "y", {PlotSeries{"s", SeriesStyle::kSolid, {{0, 0}, {1, 1}}, 0.5, {}}}};
  const std::vector<PlotPanel> panels{p};
  const auto svg = emit_curves(panels);
  EXPECT_NE(svg.find("width=\"300.00\" height=\"300.00\""), std::string::npos);
  EXPECT_NE(svg.find("s AP=0.500"), std::string::npos);
  EXPECT_NE(svg.find("points=\"50.00,250.00 270.00,30.00\""), std::string::npos);
}

TEST(Svg, UndefinedPanelsAreSkippedAndAllUndefinedThrows) {
  const Curve undefined = pr_curve(std::vector<double>{0.1, 0.2}, std::vector<std::uint8_t>{0, 0});
  PlotPanel empty{"E", "x", "y", {series_from_curve(undefined, "s", SeriesStyle::kSolid)}};
  PlotPanel full{"F", "x", "y", {PlotSeries{"s", SeriesStyle::kSolid, {{0, 1}}, {}, {}}}};
  const std::vector<PlotPanel> mixed{empty, full};
  const auto svg = emit_curves(mixed);
  EXPECT_EQ(svg.find(">E</text>"), std::string::npos);
  EXPECT_NE(svg.find(">F</text>"), std::string::npos);
  const std::vector<PlotPanel> none{empty};
  try {
    emit_curves(none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefined);
  }
}

TEST(Svg, TitlesAreEscaped) {
  PlotPanel p{"a<b&c", "x", "y", {PlotSeries{"s", SeriesStyle::kSolid, {{0, 0}}, {}, {}}}};
  const std::vector<PlotPanel> panels{p};
  EXPECT_NE(emit_curves(panels).find("a&lt;b&amp;c"), std::string::npos);
}

}  // namespace
}  // namespace labeleval::io
