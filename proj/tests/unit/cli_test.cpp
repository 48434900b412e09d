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
#include "labeleval/io/file.hpp"
#include "labeleval/io/fixture_files.hpp"
#include "labeleval/io/tensor.hpp"
#include "support/cli.hpp"

namespace labeleval {
namespace {

using cli::quote;
using cli::run;

const std::filesystem::path kData = LABELEVAL_DATA_DIR;

TEST(ShippedData, MatchesTheFixtureGenerator) {
  const auto files = io::fixture_files(fixtures::build_study_fixture());
  for (const auto& [name, bytes] : files) {
    ASSERT_TRUE(std::filesystem::exists(kData / name)) << name;
    EXPECT_EQ(io::read_file(kData / name), bytes) << name;
  }
}

TEST(Cli, SynthIsByteIdenticalAcrossRuns) {
  const auto dir = cli::scratch("cli_synth");
  std::string outputs[2][2];
  for (int i = 0; i < 2; ++i) {
    const auto labels = dir / ("l" + std::to_string(i) + ".csv");
    const auto scores = dir / ("s" + std::to_string(i) + ".csv");
    const auto r = run("synth --images 200 --prevalence 0.3,0.6 --separability 1.5,inf --seed 9 "
                       "--labels-out " + quote(labels) + " --scores-out " + quote(scores));
    ASSERT_EQ(r.exit_code, 0) << r.output;
    outputs[i][0] = io::read_file(labels);
    outputs[i][1] = io::read_file(scores);
  }
  EXPECT_EQ(outputs[0][0], outputs[1][0]);
  EXPECT_EQ(outputs[0][1], outputs[1][1]);
}

TEST(Cli, LamChannelMismatchIsReported) {
  const auto dir = cli::scratch("cli_lam");
  io::TensorDump weights;
  weights.shape = {4, 3};
  weights.data.assign(12, 0.5f);
  io::write_file_atomic(dir / "w.tensor", io::write_tensor(weights));
  const auto r = run("lam --features " + quote(kData / "lam_features.tensor") + " --weights " +
                     quote(dir / "w.tensor") + " --label 0 --base " +
                     quote(kData / "lam_base.pgm") + " --out " + quote(dir / "o.png"));
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.output.find("code=channel_mismatch"), std::string::npos) << r.output;
  EXPECT_FALSE(std::filesystem::exists(dir / "o.png"));
}

TEST(Cli, UnknownFlagIsAUsageError) {
  const auto r = run("eval --bogus 1");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("code=usage"), std::string::npos) << r.output;
}

TEST(Cli, MalformedInputNamesLineAndColumn) {
  const auto dir = cli::scratch("cli_parse");
  io::write_file_atomic(dir / "bad.csv", "image_id,A\nx,0.5\n");
  const auto r = run("thresholds --scores " + quote(dir / "bad.csv") + " --labels " +
                     quote(dir / "bad.csv") + " --out " + quote(dir / "t.csv"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("code=parse_error"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("bad.csv:2:2"), std::string::npos) << r.output;
}

TEST(Cli, EvaluatesShippedDataAndSelfChecks) {
  const auto dir = cli::scratch("cli_eval");
  const auto r = run("eval --scores " + quote(kData / "test_scores_multilabel.csv") + " --labels " +
                     quote(kData / "test_labels.csv") + " --thresholds " +
                     quote(kData / "thresholds.csv") + " --reference " +
                     quote(kData / "reference_multilabel.csv") +
                     " --timestamp fixed --format csv,text --out-dir " + quote(dir));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto text = io::read_file(dir / "report.txt");
  EXPECT_NE(text.find("0.741 (0.547 - 0.871)"), std::string::npos);
  const auto check = run("self-check --report " + quote(dir / "report.json"));
  EXPECT_EQ(check.exit_code, 0) << check.output;
  const auto cmp = run("compare --a " + quote(dir / "report.json") + " --b " +
                       quote(dir / "report.json") + " --out " + quote(dir / "cmp.csv"));
  EXPECT_EQ(cmp.exit_code, 0) << cmp.output;
}

TEST(Cli, ThresholdSelectionReproducesFixtureThresholds) {
  const auto dir = cli::scratch("cli_thr");
  const auto r = run("thresholds --scores " + quote(kData / "validation_scores.csv") +
                     " --labels " + quote(kData / "validation_labels.csv") + " --out " +
                     quote(dir / "t.csv"));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(io::read_file(dir / "t.csv"), io::read_file(kData / "thresholds.csv"));
}

}  // namespace
}  // namespace labeleval
