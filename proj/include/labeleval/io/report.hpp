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

// Report emission.
//
// report.json is the machine form and round-trips exactly. The tabular forms
// (aligned text and comma-separated) hold one table per metric with label
// rows plus the pooled "All" row and one column per cohort, followed by a
// TN/FP/FN/TP counts table.
//
// Display conventions: 3 decimals, round half to even; an undefined metric
// is an en dash "–"; a proportion of exactly 0 or 1 has no interval and is
// shown as "1 ( - )".

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "labeleval/cohort_analysis.hpp"
#include "labeleval/error.hpp"
#include "labeleval/io/file.hpp"

namespace labeleval::io {

inline constexpr std::string_view kUndefinedCell = "\xE2\x80\x93";  // U+2013

inline std::string format_fixed3(double v) {
  if (v == 0.0) return "0";
  if (v == 1.0) return "1";
  // nearbyint honours the default round-to-nearest-even mode.
  const double rounded = std::nearbyint(v * 1000.0) / 1000.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", rounded);
  return buf;
}

inline std::string format_cell(const MetricCell* cell) {
  if (cell == nullptr || !cell->value.defined()) return std::string(kUndefinedCell);
  const double v = cell->value.value();
  if (!cell->value.is_ratio()) return format_fixed3(v);
  if (cell->interval && cell->interval->bounded()) {
    return format_fixed3(v) + " (" + format_fixed3(*cell->interval->lower) + " - " +
           format_fixed3(*cell->interval->upper) + ")";
  }
  return format_fixed3(v) + " ( - )";
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

inline json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> opt_double(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

inline json to_json(const MetricCell& c) {
  json j;
  j["value"] = opt(c.value.maybe());
  j["ratio"] = c.value.is_ratio();
  if (c.value.is_ratio()) {
    j["numerator"] = c.value.numerator();
    j["denominator"] = c.value.denominator();
  }
  j["reason"] = std::string(to_string(c.reason));
  if (c.interval) {
    const auto& i = *c.interval;
    j["interval"] = {{"point", i.point},  {"lower", opt(i.lower)},   {"upper", opt(i.upper)},
                     {"confidence", i.confidence}, {"z", i.z}, {"n", i.n},
                     {"successes", i.successes}};
  }
  return j;
}

inline MetricCell cell_from_json(const json& j) {
  MetricCell c;
  const bool ratio = j.at("ratio").get<bool>();
  c.value = MetricValue::from_parts(opt_double(j.at("value")),
                                    ratio ? j.at("numerator").get<std::int64_t>() : 0,
                                    ratio ? j.at("denominator").get<std::int64_t>() : 0, ratio);
  const auto reason = undefined_reason_from_string(j.at("reason").get<std::string>());
  labeleval::detail::require(reason.has_value(), ErrorCode::kParse, "unknown reason code");
  c.reason = *reason;
  if (const auto it = j.find("interval"); it != j.end()) {
    IntervalEstimate i;
    i.point = it->at("point").get<double>();
    i.lower = opt_double(it->at("lower"));
    i.upper = opt_double(it->at("upper"));
    i.confidence = it->at("confidence").get<double>();
    i.z = it->at("z").get<double>();
    i.n = it->at("n").get<std::int64_t>();
    i.successes = it->at("successes").get<std::int64_t>();
    c.interval = i;
  }
  return c;
}

inline json to_json(const EvaluationCell& cell, std::string_view label) {
  json j;
  j["label"] = std::string(label);
  j["counts"] = {{"tn", cell.counts.tn}, {"fp", cell.counts.fp},
                 {"fn", cell.counts.fn}, {"tp", cell.counts.tp}};
  json metrics = json::object();
  for (const auto m : kAllMetrics) {
    if (const auto* mc = cell.metric(m)) metrics[std::string(to_string(m))] = to_json(*mc);
  }
  j["metrics"] = metrics;
  return j;
}

inline EvaluationCell eval_cell_from_json(const json& j) {
  EvaluationCell cell;
  const auto& c = j.at("counts");
  cell.counts = {c.at("tn").get<std::int64_t>(), c.at("fp").get<std::int64_t>(),
                 c.at("fn").get<std::int64_t>(), c.at("tp").get<std::int64_t>()};
  const auto& m = j.at("metrics");
  cell.sensitivity = cell_from_json(m.at("sensitivity"));
  cell.specificity = cell_from_json(m.at("specificity"));
  cell.precision = cell_from_json(m.at("precision"));
  cell.hamming_loss = cell_from_json(m.at("hamming_loss"));
  if (m.contains("average_precision")) {
    cell.average_precision = cell_from_json(m.at("average_precision"));
  }
  if (m.contains("auroc")) cell.auroc = cell_from_json(m.at("auroc"));
  return cell;
}

inline json selector_json(const CohortSelector& s) {
  switch (s.kind()) {
    case CohortSelector::Kind::kExactly:
      return {{"kind", "exactly"}, {"cardinality", s.cardinality()}};
    case CohortSelector::Kind::kMoreThanOne: return {{"kind", "more_than_one"}};
    case CohortSelector::Kind::kAll: return {{"kind", "all"}};
  }
  return nullptr;
}

inline CohortSelector selector_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exactly") return CohortSelector::exactly(j.at("cardinality").get<std::size_t>());
  if (kind == "more_than_one") return CohortSelector::more_than_one();
  if (kind == "all") return CohortSelector::all();
  throw Error(ErrorCode::kParse, "unknown cohort kind '" + kind + "'");
}

}  // namespace detail

inline std::string report_to_json(const EvaluationReport& report) {
  using nlohmann::json;
  json j;
  j["labels"] = report.labels.names();
  j["metadata"] = {{"thresholds", report.metadata.thresholds},
                   {"image_ids", report.metadata.image_ids},
                   {"timestamp", report.metadata.timestamp},
                   {"confidence", report.metadata.confidence},
                   {"notes", report.metadata.notes}};
  json cohorts = json::array();
  for (const auto& c : report.cohorts) {
    json cells = json::array();
    for (std::size_t k = 0; k < c.per_label.size(); ++k) {
      cells.push_back(detail::to_json(c.per_label[k], report.labels.name(k)));
    }
    cohorts.push_back({{"name", c.name},
                       {"selector", detail::selector_json(c.selector)},
                       {"member_ids", c.member_ids},
                       {"cells", cells},
                       {"pooled", detail::to_json(c.pooled, kPooledLabel)}});
  }
  j["cohorts"] = cohorts;
  json checks = json::array();
  for (const auto& r : report.reference_checks) {
    checks.push_back({{"metric", std::string(to_string(r.published.metric))},
                      {"label", r.published.label},
                      {"cohort", r.published.cohort},
                      {"published", r.published.value},
                      {"computed", detail::opt(r.computed)},
                      {"consistent", r.consistent}});
  }
  j["reference_checks"] = checks;
  return j.dump(2) + "\n";
}

inline EvaluationReport report_from_json(std::string_view text,
                                         const std::string& source = "<report>") {
  using nlohmann::json;
  try {
    const json j = json::parse(text);
    EvaluationReport r;
    r.labels = LabelSet(j.at("labels").get<std::vector<std::string>>());
    const auto& md = j.at("metadata");
    r.metadata.thresholds = md.at("thresholds").get<std::vector<double>>();
    r.metadata.image_ids = md.at("image_ids").get<std::vector<std::string>>();
    r.metadata.timestamp = md.at("timestamp").get<std::string>();
    r.metadata.confidence = md.at("confidence").get<double>();
    r.metadata.notes = md.at("notes").get<std::vector<std::string>>();
    for (const auto& c : j.at("cohorts")) {
      CohortResult cr;
      cr.name = c.at("name").get<std::string>();
      cr.selector = detail::selector_from_json(c.at("selector"));
      cr.member_ids = c.at("member_ids").get<std::vector<std::string>>();
      for (const auto& cell : c.at("cells")) cr.per_label.push_back(detail::eval_cell_from_json(cell));
      cr.pooled = detail::eval_cell_from_json(c.at("pooled"));
      r.cohorts.push_back(std::move(cr));
    }
    for (const auto& rc : j.at("reference_checks")) {
      const auto metric = metric_from_string(rc.at("metric").get<std::string>());
      labeleval::detail::require(metric.has_value(), ErrorCode::kParse, "unknown metric");
      r.reference_checks.push_back(
          {{*metric, rc.at("label").get<std::string>(), rc.at("cohort").get<std::string>(),
            rc.at("published").get<double>()},
           detail::opt_double(rc.at("computed")),
           rc.at("consistent").get<bool>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 1, 1, std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Tables

namespace detail {

using Table = std::vector<std::vector<std::string>>;

// Display width in code points, which is what the en dash needs.
inline std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (const char c : s) n += (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  return n;
}

inline std::string render_aligned(const Table& table) {
  std::vector<std::size_t> widths;
  for (const auto& row : table) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], display_width(row[c]));
    }
  }
  std::string out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line.append(widths[c] - display_width(row[c]) + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

inline std::string render_csv(const Table& table) {
  std::string out;
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

inline std::vector<std::string> row_labels(const EvaluationReport& r) {
  auto rows = r.labels.names();
  rows.emplace_back(kPooledLabel);
  return rows;
}

inline Table metric_table(const EvaluationReport& r, MetricKind m, bool with_metric_column) {
  Table t;
  std::vector<std::string> header;
  if (with_metric_column) header.emplace_back("metric");
  header.emplace_back("label");
  for (const auto& c : r.cohorts) header.push_back(c.name);
  t.push_back(header);
  for (const auto& label : row_labels(r)) {
    std::vector<std::string> row;
    if (with_metric_column) row.emplace_back(to_string(m));
    row.push_back(label);
    for (const auto& c : r.cohorts) row.push_back(format_cell(r.cell(c.name, label)->metric(m)));
    t.push_back(row);
  }
  return t;
}

inline Table counts_table(const EvaluationReport& r) {
  Table t;
  std::vector<std::string> header{"label", "count"};
  for (const auto& c : r.cohorts) header.push_back(c.name);
  t.push_back(header);
  for (const auto& label : row_labels(r)) {
    const char* names[] = {"TN", "FP", "FN", "TP"};
    for (int q = 0; q < 4; ++q) {
      std::vector<std::string> row{label, names[q]};
      for (const auto& c : r.cohorts) {
        const auto& k = r.cell(c.name, label)->counts;
        const std::int64_t v[] = {k.tn, k.fp, k.fn, k.tp};
        row.push_back(std::to_string(v[q]));
      }
      t.push_back(row);
    }
  }
  return t;
}

}  // namespace detail

inline std::string report_to_text(const EvaluationReport& report) {
  std::string out;
  out += "Evaluation of " + std::to_string(report.metadata.image_ids.size()) + " images\n";
  out += "Thresholds:";
  for (std::size_t k = 0; k < report.labels.size(); ++k) {
    out += " " + report.labels.name(k) + "=" + format_fixed3(report.metadata.thresholds.at(k));
  }
  out += "\nCohorts (by number of positive labels per image):";
  for (const auto& c : report.cohorts) {
    out += " " + c.name + " (n=" + std::to_string(c.member_ids.size()) + ")";
  }
  char conf[64];
  std::snprintf(conf, sizeof conf, "%g%%", report.metadata.confidence * 100.0);
  out += "\nIntervals: " + std::string(conf) + " logit-transform binomial intervals\n";
  if (!report.metadata.timestamp.empty()) out += "Timestamp: " + report.metadata.timestamp + "\n";
  for (const auto m : kAllMetrics) {
    out += "\n" + std::string(display_name(m)) + "\n";
    out += detail::render_aligned(detail::metric_table(report, m, false));
  }
  out += "\nConfusion counts\n";
  out += detail::render_aligned(detail::counts_table(report));
  if (!report.reference_checks.empty()) {
    out += "\nReference comparison (tolerance 0.001)\n";
    detail::Table t{{"metric", "label", "cohort", "published", "computed", "status"}};
    for (const auto& rc : report.reference_checks) {
      t.push_back({std::string(to_string(rc.published.metric)), rc.published.label,
                   rc.published.cohort, format_fixed3(rc.published.value),
                   rc.computed ? format_fixed3(*rc.computed) : std::string(kUndefinedCell),
                   rc.consistent ? "consistent" : "DISCREPANT"});
    }
    out += detail::render_aligned(t);
  }
  if (!report.metadata.notes.empty()) {
    out += "\nNotes\n";
    for (const auto& n : report.metadata.notes) out += "- " + n + "\n";
  }
  return out;
}

inline std::string report_to_csv(const EvaluationReport& report) {
  std::string out;
  bool first = true;
  for (const auto m : kAllMetrics) {
    auto t = detail::metric_table(report, m, true);
    if (!first) t.erase(t.begin());
    first = false;
    out += detail::render_csv(t);
  }
  return out;
}

inline std::string counts_to_csv(const EvaluationReport& report) {
  return detail::render_csv(detail::counts_table(report));
}

enum class ReportFormat { kDelimited, kAlignedText };

// Writes report.json plus the requested tabular forms into `dir`. Runs the
// self-check first and writes nothing if it fails.
inline std::vector<std::filesystem::path> emit_report(const EvaluationReport& report,
                                                      const std::filesystem::path& dir,
                                                      std::span<const ReportFormat> formats) {
  require_self_consistent(report);
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  files.emplace_back(dir / "report.json", report_to_json(report));
  for (const auto f : formats) {
    if (f == ReportFormat::kDelimited) {
      files.emplace_back(dir / "report.csv", report_to_csv(report));
      files.emplace_back(dir / "counts.csv", counts_to_csv(report));
    } else {
      files.emplace_back(dir / "report.txt", report_to_text(report));
    }
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [path, bytes] : files) {
    write_file_atomic(path, bytes);
    written.push_back(path);
  }
  return written;
}

}  // namespace labeleval::io
