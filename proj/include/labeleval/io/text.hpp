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

// Comma-separated text formats (UTF-8, '\n' line endings, no quoting):
//
//   label file      image_id,NGT,ETT,...     cells "0" / "1"
//   score file      image_id,NGT,ETT,...     cells decimal reals in [0, 1]
//   threshold file  label,threshold
//   split file      "# seed=<u64>" line, then image_id,partition
//   id list         one id per line
//   reference file  metric,label,cohort,value
//
// Reals are written in the shortest fixed-notation form that parses back to
// the same double, so write/parse round-trips are exact.

#pragma once

#include <charconv>
#include <span>
#include <tuple>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "labeleval/cohort_analysis.hpp"
#include "labeleval/core.hpp"
#include "labeleval/error.hpp"
#include "labeleval/io/file.hpp"

namespace labeleval::io {

// Shortest round-tripping decimal (never exponent) notation.
inline std::string format_real(double v) {
  char buf[512];  // fixed notation of any finite double fits
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

namespace detail {

struct Line {
  std::size_t number;  // 1-based
  std::string_view text;
};

// Splits into lines, dropping a trailing '\r' from each and the empty tail
// after a final newline.
inline std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({number++, line});
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty() || s.front() == '+') return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline void require_plain_field(std::string_view field, const char* what) {
  labeleval::detail::require(
      field.find_first_of(",\n\r") == std::string_view::npos, ErrorCode::kInvalidArgument,
      std::string(what) + " '" + std::string(field) + "' contains a delimiter");
}

template <typename Cell, typename ParseCell>
auto parse_matrix(std::string_view text, const std::string& source, ParseCell parse_cell) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, 1, "missing header");
  const auto header = split_fields(lines[0].text);
  if (header[0] != "image_id") throw ParseError(source, 1, 1, "header must start with image_id");
  if (header.size() < 2) throw ParseError(source, 1, 2, "header names no labels");
  std::vector<std::string> names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) throw ParseError(source, 1, c + 1, "empty label name");
    for (const auto& n : names) {
      if (n == header[c]) throw ParseError(source, 1, c + 1, "duplicate label name");
    }
    names.emplace_back(header[c]);
  }
  const std::size_t k = names.size();

  std::vector<std::string> ids;
  std::vector<Cell> cells;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.text.empty()) throw ParseError(source, line.number, 1, "blank line");
    const auto fields = split_fields(line.text);
    if (fields.size() != k + 1) {
      throw ParseError(source, line.number, fields.size() < k + 1 ? fields.size() + 1 : k + 2,
                       "expected " + std::to_string(k + 1) + " fields, found " +
                           std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(source, line.number, 1, "empty image id");
    if (!seen.emplace(fields[0]).second) {
      throw ParseError(source, line.number, 1, "duplicate image id '" + std::string(fields[0]) + "'");
    }
    ids.emplace_back(fields[0]);
    for (std::size_t c = 1; c <= k; ++c) {
      Cell value{};
      if (!parse_cell(fields[c], value)) {
        throw ParseError(source, line.number, c + 1,
                         "malformed cell '" + std::string(fields[c]) + "'");
      }
      cells.push_back(value);
    }
  }
  return std::make_tuple(LabelSet(std::move(names)), std::move(ids), std::move(cells));
}

inline std::string matrix_header(const LabelSet& labels) {
  std::string out = "image_id";
  for (const auto& n : labels.names()) {
    require_plain_field(n, "label name");
    out += ',';
    out += n;
  }
  out += '\n';
  return out;
}

}  // namespace detail

inline GroundTruthMatrix parse_labels(std::string_view text, const std::string& source = "<labels>") {
  auto [labels, ids, cells] = detail::parse_matrix<std::uint8_t>(
      text, source, [](std::string_view f, std::uint8_t& v) {
        if (f == "0") {
          v = 0;
        } else if (f == "1") {
          v = 1;
        } else {
          return false;
        }
        return true;
      });
  const std::size_t rows = ids.size();
  const std::size_t k = labels.size();
  return GroundTruthMatrix(std::move(labels), std::move(ids),
                           BinaryMatrix(rows, k, std::move(cells)));
}

inline ScoreMatrix parse_scores(std::string_view text, const std::string& source = "<scores>") {
  auto [labels, ids, cells] = detail::parse_matrix<double>(
      text, source, [](std::string_view f, double& v) {
        return detail::parse_double(f, v) && std::isfinite(v) && v >= 0.0 && v <= 1.0;
      });
  const std::size_t rows = ids.size();
  const std::size_t k = labels.size();
  return ScoreMatrix(std::move(labels), std::move(ids), RealMatrix(rows, k, std::move(cells)));
}

inline std::string write_labels(const GroundTruthMatrix& truth) {
  std::string out = detail::matrix_header(truth.labels());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    detail::require_plain_field(truth.image_ids()[i], "image id");
    out += truth.image_ids()[i];
    for (const auto cell : truth.truth().row(i)) {
      out += ',';
      out += cell ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

inline std::string write_scores(const ScoreMatrix& scores) {
  std::string out = detail::matrix_header(scores.labels());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    detail::require_plain_field(scores.image_ids()[i], "image id");
    out += scores.image_ids()[i];
    for (const double cell : scores.scores().row(i)) {
      out += ',';
      out += format_real(cell);
    }
    out += '\n';
  }
  return out;
}

inline GroundTruthMatrix load_labels(const std::filesystem::path& path) {
  return parse_labels(read_file(path), path.string());
}

inline ScoreMatrix load_scores(const std::filesystem::path& path) {
  return parse_scores(read_file(path), path.string());
}

struct LabeledThresholds {
  LabelSet labels;
  ThresholdVector thresholds;
  bool operator==(const LabeledThresholds&) const = default;
};

inline LabeledThresholds parse_thresholds(std::string_view text,
                                          const std::string& source = "<thresholds>") {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0].text != "label,threshold") {
    throw ParseError(source, 1, 1, "header must be 'label,threshold'");
  }
  std::vector<std::string> names;
  std::vector<double> values;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = detail::split_fields(lines[i].text);
    if (fields.size() != 2) throw ParseError(source, lines[i].number, 1, "expected 2 fields");
    double v = 0.0;
    if (!detail::parse_double(fields[1], v) || !(v > 0.0 && v < 1.0)) {
      throw ParseError(source, lines[i].number, 2, "threshold must be a real in (0, 1)");
    }
    names.emplace_back(fields[0]);
    values.push_back(v);
  }
  if (names.empty()) throw ParseError(source, 1, 1, "no thresholds");
  try {
    return {LabelSet(std::move(names)), ThresholdVector(std::move(values))};
  } catch (const Error& e) {
    throw ParseError(source, 1, 1, e.what());
  }
}

inline std::string write_thresholds(const LabelSet& labels, const ThresholdVector& thresholds) {
  labeleval::detail::require(labels.size() == thresholds.size(), ErrorCode::kDimensionMismatch,
                             "threshold count does not match the label count");
  std::string out = "label,threshold\n";
  for (std::size_t k = 0; k < labels.size(); ++k) {
    detail::require_plain_field(labels.name(k), "label name");
    out += labels.name(k) + "," + format_real(thresholds[k]) + "\n";
  }
  return out;
}

// Returns the thresholds reordered to `labels`.
inline ThresholdVector thresholds_for(const LabeledThresholds& file, const LabelSet& labels) {
  labeleval::detail::require(file.labels.size() == labels.size(), ErrorCode::kMisaligned,
                             "threshold file and label set sizes differ");
  std::vector<double> out;
  for (const auto& name : labels.names()) {
    const auto k = file.labels.index_of(name);
    labeleval::detail::require(k.has_value(), ErrorCode::kMisaligned,
                               "no threshold for label '" + name + "'");
    out.push_back(file.thresholds[*k]);
  }
  return ThresholdVector(std::move(out));
}

inline SplitAssignment parse_split(std::string_view text, const std::string& source = "<split>") {
  const auto lines = detail::split_lines(text);
  constexpr std::string_view kSeed = "# seed=";
  if (lines.empty() || !lines[0].text.starts_with(kSeed)) {
    throw ParseError(source, 1, 1, "first line must be '# seed=<integer>'");
  }
  std::uint64_t seed = 0;
  if (!detail::parse_u64(lines[0].text.substr(kSeed.size()), seed)) {
    throw ParseError(source, 1, 1, "malformed seed");
  }
  if (lines.size() < 2 || lines[1].text != "image_id,partition") {
    throw ParseError(source, 2, 1, "header must be 'image_id,partition'");
  }
  std::vector<std::string> ids;
  std::vector<Partition> parts;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto fields = detail::split_fields(lines[i].text);
    if (fields.size() != 2) throw ParseError(source, lines[i].number, 1, "expected 2 fields");
    if (fields[0].empty() || !seen.emplace(fields[0]).second) {
      throw ParseError(source, lines[i].number, 1, "empty or duplicate image id");
    }
    const auto p = partition_from_string(fields[1]);
    if (!p) throw ParseError(source, lines[i].number, 2, "unknown partition");
    ids.emplace_back(fields[0]);
    parts.push_back(*p);
  }
  return SplitAssignment(std::move(ids), std::move(parts), seed);
}

inline std::string write_split(const SplitAssignment& split) {
  std::string out = "# seed=" + std::to_string(split.seed()) + "\nimage_id,partition\n";
  for (std::size_t i = 0; i < split.ids().size(); ++i) {
    detail::require_plain_field(split.ids()[i], "image id");
    out += split.ids()[i];
    out += ',';
    out += to_string(split.partitions()[i]);
    out += '\n';
  }
  return out;
}

// One id per line. A label or score file is also accepted: its header is
// skipped and the first field of each row is taken.
inline std::vector<std::string> parse_id_list(std::string_view text,
                                              const std::string& source = "<ids>") {
  const auto lines = detail::split_lines(text);
  std::vector<std::string> ids;
  std::size_t first = 0;
  if (!lines.empty() && lines[0].text.starts_with("image_id")) first = 1;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto id = detail::split_fields(lines[i].text)[0];
    if (id.empty()) throw ParseError(source, lines[i].number, 1, "empty image id");
    ids.emplace_back(id);
  }
  return ids;
}

inline std::vector<PublishedValue> parse_reference(std::string_view text,
                                                   const std::string& source = "<reference>") {
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0].text != "metric,label,cohort,value") {
    throw ParseError(source, 1, 1, "header must be 'metric,label,cohort,value'");
  }
  std::vector<PublishedValue> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = detail::split_fields(lines[i].text);
    if (fields.size() != 4) throw ParseError(source, lines[i].number, 1, "expected 4 fields");
    const auto metric = metric_from_string(fields[0]);
    if (!metric) throw ParseError(source, lines[i].number, 1, "unknown metric");
    double v = 0.0;
    if (!detail::parse_double(fields[3], v)) {
      throw ParseError(source, lines[i].number, 4, "malformed value");
    }
    out.push_back({*metric, std::string(fields[1]), std::string(fields[2]), v});
  }
  return out;
}

inline std::string write_reference(std::span<const PublishedValue> values) {
  std::string out = "metric,label,cohort,value\n";
  for (const auto& v : values) {
    out += std::string(to_string(v.metric)) + "," + v.label + "," + v.cohort + "," +
           format_real(v.value) + "\n";
  }
  return out;
}

}  // namespace labeleval::io
