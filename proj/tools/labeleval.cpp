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

// labeleval command-line tool.
//
// Every subcommand reads its inputs from files, writes its outputs
// atomically, and on failure prints one line to stderr:
//
//   error code=<code> message="<text>"
//
// and exits with status 1 (2 for usage errors).

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "labeleval/cohort_analysis.hpp"
#include "labeleval/core.hpp"
#include "labeleval/fixtures.hpp"
#include "labeleval/io/fixture_files.hpp"
#include "labeleval/io/image.hpp"
#include "labeleval/io/report.hpp"
#include "labeleval/io/svg.hpp"
#include "labeleval/io/tensor.hpp"
#include "labeleval/io/text.hpp"
#include "labeleval/lam.hpp"
#include "labeleval/synthetic.hpp"
#include "labeleval/threshold.hpp"

namespace fs = std::filesystem;
using namespace labeleval;

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

void report_error(std::string_view code, const std::string& message) {
  std::cerr << "error code=" << code << " message=" << quote(message) << "\n";
}

ThresholdGrid parse_grid(const std::string& name, double step) {
  if (name == "observed") return ObservedScores{};
  return FixedStep{step};
}

std::vector<io::ReportFormat> parse_formats(const std::vector<std::string>& names) {
  std::vector<io::ReportFormat> out;
  for (const auto& n : names) {
    out.push_back(n == "csv" ? io::ReportFormat::kDelimited : io::ReportFormat::kAlignedText);
  }
  return out;
}

std::size_t resolve_label(const std::string& label, const HeadWeights& head) {
  for (std::size_t k = 0; k < head.label_names.size(); ++k) {
    if (head.label_names[k] == label) return k;
  }
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), index);
  detail::require(ec == std::errc() && ptr == label.data() + label.size() && index < head.labels,
                  ErrorCode::kInvalidArgument, "unknown label '" + label + "'");
  return index;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    double v = 0.0;
    detail::require(io::detail::parse_double(item, v), ErrorCode::kInvalidArgument,
                    std::string("malformed ") + what + " entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-label classifier evaluation toolkit"};
  app.set_config("--config", "", "Read options from a key=value file");
  app.require_subcommand(1);

  // split
  auto* split = app.add_subcommand("split", "Partition image ids into training/validation/testing");
  std::string split_ids;
  std::string split_out;
  SplitCounts split_counts{629, 70, 78};
  std::uint64_t split_seed = 0;
  split->add_option("--ids", split_ids, "Id list, or a label file")->required();
  split->add_option("--training", split_counts.training, "Training count")->capture_default_str();
  split->add_option("--validation", split_counts.validation, "Validation count")
      ->capture_default_str();
  split->add_option("--testing", split_counts.testing, "Testing count")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->required();
  split->add_option("--out", split_out, "Split file to write")->required();

  // thresholds
  auto* thr = app.add_subcommand("thresholds", "Select per-label thresholds on validation data");
  std::string thr_scores;
  std::string thr_labels;
  std::string thr_out;
  std::string thr_plot;
  std::string thr_grid = "fixed";
  double thr_step = 0.05;
  thr->add_option("--scores", thr_scores, "Validation score file")->required();
  thr->add_option("--labels", thr_labels, "Validation label file")->required();
  thr->add_option("--grid", thr_grid, "Candidate set")
      ->check(CLI::IsMember({"fixed", "observed"}))
      ->capture_default_str();
  thr->add_option("--step", thr_step, "Fixed grid spacing")->capture_default_str();
  thr->add_option("--out", thr_out, "Threshold file to write")->required();
  thr->add_option("--plot", thr_plot, "Optional SVG with recall-vs-threshold traces");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate test predictions per cardinality cohort");
  std::string eval_scores;
  std::string eval_labels;
  std::string eval_thresholds;
  std::string eval_out;
  std::string eval_reference;
  std::string eval_timestamp;
  double eval_confidence = 0.95;
  std::vector<std::string> eval_formats{"csv", "text"};
  eval->add_option("--scores", eval_scores, "Test score file")->required();
  eval->add_option("--labels", eval_labels, "Test label file")->required();
  eval->add_option("--thresholds", eval_thresholds, "Threshold file")->required();
  eval->add_option("--out-dir", eval_out, "Directory for report files")->required();
  eval->add_option("--reference", eval_reference, "Published values to compare against");
  eval->add_option("--confidence", eval_confidence, "Interval confidence level")
      ->capture_default_str();
  eval->add_option("--timestamp", eval_timestamp, "Timestamp recorded in the report");
  eval->add_option("--format", eval_formats, "Tabular formats: csv, text")
      ->check(CLI::IsMember({"csv", "text"}))
      ->delimiter(',');

  // curves
  auto* curves = app.add_subcommand("curves", "Plot PR or ROC curves per label");
  std::string cur_scores;
  std::string cur_labels;
  std::string cur_out;
  std::string cur_kind = "pr";
  curves->add_option("--scores", cur_scores, "Score file")->required();
  curves->add_option("--labels", cur_labels, "Label file")->required();
  curves->add_option("--kind", cur_kind, "pr or roc")
      ->check(CLI::IsMember({"pr", "roc"}))
      ->capture_default_str();
  curves->add_option("--out", cur_out, "SVG file to write")->required();

  // lam
  auto* lam = app.add_subcommand("lam", "Render a label activation map overlay");
  std::string lam_features;
  std::string lam_weights;
  std::string lam_label;
  std::string lam_base;
  std::string lam_out;
  std::string lam_map_out;
  double lam_opacity = 0.5;
  lam->add_option("--features", lam_features, "Feature map tensor dump [C,H,W]")->required();
  lam->add_option("--weights", lam_weights, "Head weight tensor dump [K,C]")->required();
  lam->add_option("--label", lam_label, "Label name or row index")->required();
  lam->add_option("--base", lam_base, "Grayscale base image (PNG or PGM)")->required();
  lam->add_option("--out", lam_out, "Overlay PNG to write")->required();
  lam->add_option("--map-out", lam_map_out, "Optional normalized map as grayscale PNG");
  lam->add_option("--opacity", lam_opacity, "Overlay opacity in [0, 1]")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic label/score pair");
  std::string syn_prevalence;
  std::string syn_separability;
  std::string syn_names;
  std::string syn_labels_out;
  std::string syn_scores_out;
  std::size_t syn_images = 0;
  std::uint64_t syn_seed = 0;
  synth->add_option("--images", syn_images, "Number of images")->required();
  synth->add_option("--prevalence", syn_prevalence, "Comma-separated per-label prevalence")
      ->required();
  synth->add_option("--separability", syn_separability,
                    "Comma-separated per-label separability (inf allowed)")
      ->required();
  synth->add_option("--label-names", syn_names, "Comma-separated label names");
  synth->add_option("--seed", syn_seed, "Generator seed")->required();
  synth->add_option("--labels-out", syn_labels_out, "Label file to write")->required();
  synth->add_option("--scores-out", syn_scores_out, "Score file to write")->required();

  // self-check
  auto* check = app.add_subcommand("self-check", "Recompute and verify a report.json");
  std::string chk_report;
  check->add_option("--report", chk_report, "report.json to verify")->required();

  // compare
  auto* compare = app.add_subcommand("compare", "Tabulate metric deltas between two reports");
  std::string cmp_a;
  std::string cmp_b;
  std::string cmp_out;
  compare->add_option("--a", cmp_a, "Baseline report.json")->required();
  compare->add_option("--b", cmp_b, "Comparison report.json")->required();
  compare->add_option("--out", cmp_out, "CSV file to write")->required();

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Write the count-realizing study fixture files");
  std::string fix_out;
  std::uint64_t fix_seed = fixtures::kDefaultSeed;
  fixture->add_option("--out-dir", fix_out, "Directory to write")->required();
  fixture->add_option("--seed", fix_seed, "Fixture seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    report_error("usage", e.what());
    return 2;
  }

  try {
    if (*split) {
      const auto ids = io::parse_id_list(io::read_file(split_ids), split_ids);
      const auto assignment = split_dataset(ids, split_counts, split_seed);
      io::write_file_atomic(split_out, io::write_split(assignment));
      const auto c = assignment.counts();
      std::printf("training=%zu validation=%zu testing=%zu\n", c.training, c.validation, c.testing);
    } else if (*thr) {
      const auto truth = io::load_labels(thr_labels);
      const auto scores = io::load_scores(thr_scores);
      const auto results = search_all(scores, truth, parse_grid(thr_grid, thr_step));
      std::vector<double> chosen;
      for (const auto& r : results) {
        chosen.push_back(r.chosen);
        std::printf("%s threshold=%s objective=%.6f ties=%zu%s\n",
                    truth.labels().name(r.label_index).c_str(),
                    io::format_real(r.chosen).c_str(), r.objective, r.tie_set.size(),
                    r.non_discriminative ? " non_discriminative" : "");
      }
      const ThresholdVector tv(std::move(chosen));
      io::write_file_atomic(thr_out, io::write_thresholds(truth.labels(), tv));
      if (!thr_plot.empty()) {
        const auto panels = io::threshold_trace_panels(scores, truth);
        io::write_file_atomic(thr_plot, io::emit_curves(panels));
      }
    } else if (*eval) {
      const auto truth = io::load_labels(eval_labels);
      const auto scores = io::load_scores(eval_scores);
      const auto file = io::parse_thresholds(io::read_file(eval_thresholds), eval_thresholds);
      const auto thresholds = io::thresholds_for(file, truth.labels());
      EvaluateOptions options;
      options.confidence = eval_confidence;
      options.timestamp = eval_timestamp;
      auto report = evaluate(scores, truth, thresholds, options);
      if (!eval_reference.empty()) {
        const auto published = io::parse_reference(io::read_file(eval_reference), eval_reference);
        check_reference(report, published);
      }
      const auto formats = parse_formats(eval_formats);
      for (const auto& path : io::emit_report(report, eval_out, formats)) {
        std::printf("wrote %s\n", path.string().c_str());
      }
    } else if (*curves) {
      const auto truth = io::load_labels(cur_labels);
      const auto scores = io::load_scores(cur_scores);
      const auto kind = cur_kind == "roc" ? CurveKind::kRoc : CurveKind::kPrecisionRecall;
      const auto panels = io::cohort_curve_panels(scores, truth, kind);
      io::write_file_atomic(cur_out, io::emit_curves(panels));
    } else if (*lam) {
      const auto features = io::to_feature_map(io::load_tensor(lam_features));
      const auto head = io::to_head_weights(io::load_tensor(lam_weights));
      const auto base = io::load_gray_image(lam_base);
      const auto label = resolve_label(lam_label, head);
      const auto map = compute_lam(features, head, label);
      const auto full = upsample(map, base.height, base.width);
      io::write_file_atomic(lam_out, io::write_png(render_overlay(full, base, lam_opacity)));
      if (!lam_map_out.empty()) {
        GrayImage gray{full.width, full.height, {}};
        for (const double v : full.normalized) {
          gray.pixels.push_back(static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5)));
        }
        io::write_file_atomic(lam_map_out, io::write_png(gray));
      }
    } else if (*synth) {
      SyntheticSpec spec;
      spec.images = syn_images;
      spec.seed = syn_seed;
      spec.prevalence = parse_list(syn_prevalence, "prevalence");
      spec.separability = parse_list(syn_separability, "separability");
      std::vector<std::string> names;
      if (syn_names.empty()) {
        for (std::size_t k = 0; k < spec.prevalence.size(); ++k) {
          names.push_back("L" + std::to_string(k + 1));
        }
      } else {
        std::stringstream ss(syn_names);
        std::string item;
        while (std::getline(ss, item, ',')) names.push_back(item);
      }
      spec.labels = LabelSet(names);
      const auto [truth, scores] = generate_synthetic(spec);
      io::write_file_atomic(syn_labels_out, io::write_labels(truth));
      io::write_file_atomic(syn_scores_out, io::write_scores(scores));
    } else if (*check) {
      const auto report = io::report_from_json(io::read_file(chk_report), chk_report);
      const auto problems = self_check(report);
      for (const auto& p : problems) std::printf("problem: %s\n", p.c_str());
      if (!problems.empty()) {
        report_error(to_string(ErrorCode::kSelfCheck),
                     std::to_string(problems.size()) + " inconsistencies; first: " + problems[0]);
        return 1;
      }
      std::printf("ok\n");
    } else if (*compare) {
      const auto a = io::report_from_json(io::read_file(cmp_a), cmp_a);
      const auto b = io::report_from_json(io::read_file(cmp_b), cmp_b);
      const auto table = compare_networks(a, b);
      std::string out = "cohort,label,metric,a,b,delta\n";
      const auto cell = [](const std::optional<double>& v) {
        return v ? io::format_fixed3(*v) : std::string(io::kUndefinedCell);
      };
      for (const auto& r : table.rows) {
        out += r.cohort + "," + r.label + "," + std::string(to_string(r.metric)) + "," +
               cell(r.a) + "," + cell(r.b) + "," + cell(r.delta) + "\n";
      }
      io::write_file_atomic(cmp_out, out);
    } else if (*fixture) {
      const auto files = io::fixture_files(fixtures::build_study_fixture(fix_seed));
      for (const auto& [name, bytes] : files) {
        io::write_file_atomic(fs::path(fix_out) / name, bytes);
      }
      std::printf("wrote %zu files to %s\n", files.size(), fix_out.c_str());
    }
  } catch (const ParseError& e) {
    report_error(to_string(e.code()), e.what());
    return 1;
  } catch (const Error& e) {
    report_error(to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
  return 0;
}
