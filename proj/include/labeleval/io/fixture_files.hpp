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

// Serialized form of the study fixture, as shipped under data/.

#pragma once

#include <map>
#include <string>

#include "labeleval/fixtures.hpp"
#include "labeleval/io/image.hpp"
#include "labeleval/io/tensor.hpp"
#include "labeleval/io/text.hpp"

namespace labeleval::io {

// File name -> contents, in a fixed order.
inline std::map<std::string, std::string> fixture_files(const fixtures::StudyFixture& f) {
  std::map<std::string, std::string> files;
  files["dataset_labels.csv"] = write_labels(f.dataset);
  files["split.csv"] = write_split(f.split);
  files["validation_labels.csv"] = write_labels(f.validation_truth);
  files["validation_scores.csv"] = write_scores(f.validation_scores);
  files["test_labels.csv"] = write_labels(f.test_truth);
  files["test_scores_multilabel.csv"] = write_scores(f.multi_label_scores);
  files["test_scores_singlelabel.csv"] = write_scores(f.single_label_scores);
  files["thresholds.csv"] = write_thresholds(f.test_truth.labels(), f.thresholds);
  const auto multi = fixtures::multi_label_reference();
  const auto single = fixtures::single_label_reference();
  files["reference_multilabel.csv"] = write_reference(multi);
  files["reference_singlelabel.csv"] = write_reference(single);
  files["lam_features.tensor"] = write_tensor(to_tensor(f.lam_features));
  files["lam_weights.tensor"] = write_tensor(to_tensor(f.lam_weights));
  files["lam_base.pgm"] = write_pgm(f.lam_base);
  return files;
}

}  // namespace labeleval::io
