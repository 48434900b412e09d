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

// SVG curve plots, one panel per label on a unit square.
//
// Line styles: solid for the multi-label cohort, dash-dot for the full
// cohort, dotted grey for a recall-vs-threshold trace. All coordinates are
// printed with fixed precision so output is byte-stable.

#pragma once

#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "labeleval/cohort_analysis.hpp"
#include "labeleval/curves.hpp"
#include "labeleval/error.hpp"
#include "labeleval/io/report.hpp"

namespace labeleval::io {

enum class SeriesStyle : std::uint8_t { kSolid, kDashDot, kDottedGrey };

struct PlotSeries {
  std::string name;
  SeriesStyle style = SeriesStyle::kSolid;
  std::vector<std::pair<double, double>> points;
  std::optional<double> average_precision;
  std::optional<double> auroc;
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;

  bool has_data() const {
    for (const auto& s : series) {
      if (!s.points.empty()) return true;
    }
    return false;
  }
};

// Converts a curve into a plotted series; an undefined curve has no points.
inline PlotSeries series_from_curve(const Curve& curve, std::string name, SeriesStyle style) {
  PlotSeries s{std::move(name), style, {}, std::nullopt, std::nullopt};
  for (const auto& p : curve.points) s.points.emplace_back(p.x, p.y);
  if (curve.area.defined()) {
    if (curve.kind == CurveKind::kPrecisionRecall) {
      s.average_precision = curve.area.value();
    } else {
      s.auroc = curve.area.value();
    }
  }
  return s;
}

inline PlotSeries series_from_trace(std::span<const RecallThreshold> trace, std::string name) {
  PlotSeries s{std::move(name), SeriesStyle::kDottedGrey, {}, std::nullopt, std::nullopt};
  for (const auto& t : trace) s.points.emplace_back(t.recall, t.threshold);
  return s;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape_xml(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline const char* stroke_attributes(SeriesStyle style) {
  switch (style) {
    case SeriesStyle::kSolid: return R"(stroke="#1f4e9c" stroke-width="1.5")";
    case SeriesStyle::kDashDot:
      return R"(stroke="#1f4e9c" stroke-width="1.5" stroke-dasharray="8,3,2,3")";
    case SeriesStyle::kDottedGrey:
      return R"(stroke="#888888" stroke-width="1.2" stroke-dasharray="1.5,3")";
  }
  return "";
}

inline constexpr double kPanelSize = 300.0;
inline constexpr double kPlot = 220.0;
inline constexpr double kLeft = 50.0;
inline constexpr double kTop = 30.0;

inline std::string render_panel(const PlotPanel& panel, double ox, double oy) {
  const auto px = [&](double x) { return ox + kLeft + x * kPlot; };
  const auto py = [&](double y) { return oy + kTop + (1.0 - y) * kPlot; };
  std::string out;
  out += "<g>\n";
  out += "<text x=\"" + fmt(ox + kLeft + kPlot / 2) + "\" y=\"" + fmt(oy + 18) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape_xml(panel.title) + "</text>\n";
  out += "<rect x=\"" + fmt(px(0)) + "\" y=\"" + fmt(py(1)) + "\" width=\"" + fmt(kPlot) +
         "\" height=\"" + fmt(kPlot) + "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    out += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(py(0) + 14) +
           "\" text-anchor=\"middle\" font-size=\"9\">" + fmt(v) + "</text>\n";
    out += "<text x=\"" + fmt(px(0) - 4) + "\" y=\"" + fmt(py(v) + 3) +
           "\" text-anchor=\"end\" font-size=\"9\">" + fmt(v) + "</text>\n";
  }
  out += "<text x=\"" + fmt(px(0.5)) + "\" y=\"" + fmt(py(0) + 28) +
         "\" text-anchor=\"middle\" font-size=\"10\">" + escape_xml(panel.x_label) + "</text>\n";
  out += "<text x=\"" + fmt(ox + 14) + "\" y=\"" + fmt(py(0.5)) +
         "\" text-anchor=\"middle\" font-size=\"10\" transform=\"rotate(-90 " + fmt(ox + 14) +
         " " + fmt(py(0.5)) + ")\">" + escape_xml(panel.y_label) + "</text>\n";

  int annotation = 0;
  for (const auto& s : panel.series) {
    if (s.points.empty()) continue;
    out += "<polyline fill=\"none\" " + std::string(stroke_attributes(s.style)) + " points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i > 0) out += ' ';
      out += fmt(px(s.points[i].first)) + "," + fmt(py(s.points[i].second));
    }
    out += "\"/>\n";
    std::string note = s.name;
    if (s.average_precision) note += " AP=" + format_fixed3(*s.average_precision);
    if (s.auroc) note += " AUROC=" + format_fixed3(*s.auroc);
    out += "<text x=\"" + fmt(px(0.04)) + "\" y=\"" + fmt(py(0.04) - 12.0 * annotation) +
           "\" font-size=\"9\">" + escape_xml(note) + "</text>\n";
    ++annotation;
  }
  out += "</g>\n";
  return out;
}

}  // namespace detail

// Renders the panels that hold at least one point, two per row. Throws
// kUndefined when nothing is plottable.
inline std::string emit_curves(std::span<const PlotPanel> panels) {
  std::vector<const PlotPanel*> shown;
  for (const auto& p : panels) {
    if (p.has_data()) shown.push_back(&p);
  }
  labeleval::detail::require(!shown.empty(), ErrorCode::kUndefined, "no defined curves to plot");
  const std::size_t columns = shown.size() == 1 ? 1 : 2;
  const std::size_t rows = (shown.size() + columns - 1) / columns;
  const double width = detail::kPanelSize * static_cast<double>(columns);
  const double height = detail::kPanelSize * static_cast<double>(rows);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(width) +
         "\" height=\"" + detail::fmt(height) + "\" viewBox=\"0 0 " + detail::fmt(width) + " " +
         detail::fmt(height) + "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < shown.size(); ++i) {
    out += detail::render_panel(*shown[i], detail::kPanelSize * static_cast<double>(i % columns),
                                detail::kPanelSize * static_cast<double>(i / columns));
  }
  out += "</svg>\n";
  return out;
}

// Builds one panel per label with the full cohort (dash-dot) and, when
// present, the multi-label cohort (solid).
inline std::vector<PlotPanel> cohort_curve_panels(const ScoreMatrix& scores,
                                                  const GroundTruthMatrix& truth, CurveKind kind) {
  const ScoreMatrix aligned = align(scores, truth);
  const auto full = cohort_by_cardinality(truth, CohortSelector::all());
  const auto multi = cohort_by_cardinality(truth, CohortSelector::more_than_one());
  const auto build = [&](std::size_t k, const CardinalityCohort& cohort) {
    std::vector<double> s;
    std::vector<std::uint8_t> t;
    for (const auto r : cohort.rows) {
      s.push_back(aligned.scores()(r, k));
      t.push_back(truth.truth()(r, k));
    }
    return kind == CurveKind::kPrecisionRecall ? pr_curve(s, t) : roc_curve(s, t);
  };
  std::vector<PlotPanel> panels;
  for (std::size_t k = 0; k < truth.label_count(); ++k) {
    PlotPanel p;
    p.title = truth.labels().name(k);
    p.x_label = kind == CurveKind::kPrecisionRecall ? "Recall" : "False positive rate";
    p.y_label = kind == CurveKind::kPrecisionRecall ? "Precision" : "True positive rate";
    p.series.push_back(series_from_curve(build(k, full), full.selector.name(truth.label_count()),
                                         SeriesStyle::kDashDot));
    if (!multi.rows.empty()) {
      p.series.push_back(series_from_curve(build(k, multi), multi.selector.name(truth.label_count()),
                                           SeriesStyle::kSolid));
    }
    panels.push_back(std::move(p));
  }
  return panels;
}

// Validation view: per label, the PR curve plus the recall-vs-threshold trace.
inline std::vector<PlotPanel> threshold_trace_panels(const ScoreMatrix& scores,
                                                     const GroundTruthMatrix& truth) {
  const ScoreMatrix aligned = align(scores, truth);
  std::vector<PlotPanel> panels;
  for (std::size_t k = 0; k < truth.label_count(); ++k) {
    const auto s = aligned.scores().column(k);
    const auto t = truth.truth().column(k);
    const Curve curve = pr_curve(s, t);
    PlotPanel p;
    p.title = truth.labels().name(k);
    p.x_label = "Recall";
    p.y_label = "Precision / threshold";
    p.series.push_back(series_from_curve(curve, "validation", SeriesStyle::kSolid));
    const auto trace = threshold_trace(curve);
    p.series.push_back(series_from_trace(trace, "threshold"));
    panels.push_back(std::move(p));
  }
  return panels;
}

}  // namespace labeleval::io
