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

// Shared data model: label sets, ground truth and score matrices, threshold
// vectors, dataset splits and label-cardinality cohorts.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "labeleval/error.hpp"
#include "labeleval/random.hpp"

namespace labeleval {

// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    detail::require(data_.size() == rows_ * cols_, ErrorCode::kDimensionMismatch,
                    "matrix data length does not match its shape");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const {
    return std::span<const T>(data_).subspan(r * cols_, cols_);
  }
  std::span<T> row(std::size_t r) { return std::span<T>(data_).subspan(r * cols_, cols_); }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  const std::vector<T>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using BinaryMatrix = Matrix<std::uint8_t>;
using PredictionMatrix = BinaryMatrix;
using RealMatrix = Matrix<double>;

// Ordered, index-stable set of label names.
class LabelSet {
 public:
  LabelSet() : LabelSet(std::vector<std::string>{"NGT", "ETT", "UAC", "UVC"}) {}

  explicit LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
    detail::require(!names_.empty(), ErrorCode::kInvalidArgument,
                    "a label set needs at least one label");
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
      detail::require(!name.empty(), ErrorCode::kInvalidArgument, "empty label name");
      detail::require(seen.insert(name).second, ErrorCode::kInvalidArgument,
                      "duplicate label name '" + name + "'");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t index) const { return names_.at(index); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<std::string> names_;
};

namespace detail {

inline void require_unique_ids(const std::vector<std::string>& ids) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(ids.size());
  for (const auto& id : ids) {
    require(!id.empty(), ErrorCode::kInvalidArgument, "empty image id");
    require(seen.insert(id).second, ErrorCode::kInvalidArgument,
            "duplicate image id '" + id + "'");
  }
}

}  // namespace detail

// Per-image binary presence of each label.
class GroundTruthMatrix {
 public:
  GroundTruthMatrix() = default;
  GroundTruthMatrix(LabelSet labels, std::vector<std::string> image_ids, BinaryMatrix truth)
      : labels_(std::move(labels)), image_ids_(std::move(image_ids)), truth_(std::move(truth)) {
    detail::require(truth_.rows() == image_ids_.size(), ErrorCode::kDimensionMismatch,
                    "truth row count does not match the number of image ids");
    detail::require(truth_.cols() == labels_.size() || image_ids_.empty(),
                    ErrorCode::kDimensionMismatch,
                    "truth column count does not match the label count");
    if (truth_.cols() != labels_.size()) truth_ = BinaryMatrix(0, labels_.size());
    for (const auto cell : truth_.data()) {
      detail::require(cell <= 1, ErrorCode::kInvalidArgument, "truth cells must be 0 or 1");
    }
    detail::require_unique_ids(image_ids_);
  }

  const LabelSet& labels() const noexcept { return labels_; }
  const std::vector<std::string>& image_ids() const noexcept { return image_ids_; }
  const BinaryMatrix& truth() const noexcept { return truth_; }
  std::size_t size() const noexcept { return image_ids_.size(); }
  std::size_t label_count() const noexcept { return labels_.size(); }

  std::size_t cardinality(std::size_t row) const {
    const auto r = truth_.row(row);
    return static_cast<std::size_t>(std::count(r.begin(), r.end(), std::uint8_t{1}));
  }

  std::size_t positives(std::size_t label) const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < truth_.rows(); ++r) n += truth_(r, label);
    return n;
  }

  bool operator==(const GroundTruthMatrix&) const = default;

 private:
  LabelSet labels_;
  std::vector<std::string> image_ids_;
  BinaryMatrix truth_;
};

// Per-image, per-label classifier probabilities.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(LabelSet labels, std::vector<std::string> image_ids, RealMatrix scores)
      : labels_(std::move(labels)), image_ids_(std::move(image_ids)), scores_(std::move(scores)) {
    detail::require(scores_.rows() == image_ids_.size(), ErrorCode::kDimensionMismatch,
                    "score row count does not match the number of image ids");
    detail::require(scores_.cols() == labels_.size() || image_ids_.empty(),
                    ErrorCode::kDimensionMismatch,
                    "score column count does not match the label count");
    if (scores_.cols() != labels_.size()) scores_ = RealMatrix(0, labels_.size());
    for (const double s : scores_.data()) {
      detail::require(std::isfinite(s), ErrorCode::kNonFinite, "non-finite score");
      detail::require(s >= 0.0 && s <= 1.0, ErrorCode::kInvalidArgument,
                      "score outside [0, 1]");
    }
    detail::require_unique_ids(image_ids_);
  }

  const LabelSet& labels() const noexcept { return labels_; }
  const std::vector<std::string>& image_ids() const noexcept { return image_ids_; }
  const RealMatrix& scores() const noexcept { return scores_; }
  std::size_t size() const noexcept { return image_ids_.size(); }
  std::size_t label_count() const noexcept { return labels_.size(); }

  bool operator==(const ScoreMatrix&) const = default;

 private:
  LabelSet labels_;
  std::vector<std::string> image_ids_;
  RealMatrix scores_;
};

// One decision threshold per label, each strictly inside (0, 1).
class ThresholdVector {
 public:
  ThresholdVector() = default;
  explicit ThresholdVector(std::vector<double> per_label) : per_label_(std::move(per_label)) {
    for (const double t : per_label_) {
      detail::require(std::isfinite(t) && t > 0.0 && t < 1.0, ErrorCode::kInvalidArgument,
                      "thresholds must lie strictly inside (0, 1)");
    }
  }

  std::size_t size() const noexcept { return per_label_.size(); }
  double operator[](std::size_t k) const { return per_label_[k]; }
  const std::vector<double>& values() const noexcept { return per_label_; }

  bool operator==(const ThresholdVector&) const = default;

 private:
  std::vector<double> per_label_;
};

// prediction(i, k) = 1 iff score(i, k) >= threshold(k).
inline PredictionMatrix binarize(const ScoreMatrix& scores, const ThresholdVector& thresholds) {
  detail::require(scores.label_count() == thresholds.size(), ErrorCode::kDimensionMismatch,
                  "threshold count does not match the label count");
  const auto& s = scores.scores();
  PredictionMatrix out(s.rows(), thresholds.size());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      out(i, k) = s(i, k) >= thresholds[k] ? 1 : 0;
    }
  }
  return out;
}

// Reorders `scores` rows to follow `truth`'s image order. Both must carry the
// same label names and the same set of image ids.
inline ScoreMatrix align(const ScoreMatrix& scores, const GroundTruthMatrix& truth) {
  detail::require(scores.labels() == truth.labels(), ErrorCode::kMisaligned,
                  "score and truth label sets differ");
  detail::require(scores.size() == truth.size(), ErrorCode::kMisaligned,
                  "score and truth row counts differ");
  std::unordered_map<std::string_view, std::size_t> row_of;
  row_of.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) row_of.emplace(scores.image_ids()[i], i);

  const std::size_t k = truth.label_count();
  RealMatrix reordered(truth.size(), k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto it = row_of.find(truth.image_ids()[i]);
    detail::require(it != row_of.end(), ErrorCode::kMisaligned,
                    "image '" + truth.image_ids()[i] + "' has no scores");
    const auto src = scores.scores().row(it->second);
    std::copy(src.begin(), src.end(), reordered.row(i).begin());
  }
  return ScoreMatrix(truth.labels(), truth.image_ids(), std::move(reordered));
}

enum class Partition : std::uint8_t { kTraining, kValidation, kTesting };

constexpr std::string_view to_string(Partition p) {
  switch (p) {
    case Partition::kTraining: return "Training";
    case Partition::kValidation: return "Validation";
    case Partition::kTesting: return "Testing";
  }
  return "?";
}

inline std::optional<Partition> partition_from_string(std::string_view s) {
  if (s == "Training") return Partition::kTraining;
  if (s == "Validation") return Partition::kValidation;
  if (s == "Testing") return Partition::kTesting;
  return std::nullopt;
}

struct SplitCounts {
  std::size_t training = 0;
  std::size_t validation = 0;
  std::size_t testing = 0;

  std::size_t total() const noexcept { return training + validation + testing; }
  bool operator==(const SplitCounts&) const = default;
};

// Partition of image ids, kept in the order the ids were supplied.
class SplitAssignment {
 public:
  SplitAssignment() = default;
  SplitAssignment(std::vector<std::string> ids, std::vector<Partition> partitions,
                  std::uint64_t seed)
      : ids_(std::move(ids)), partitions_(std::move(partitions)), seed_(seed) {
    detail::require(ids_.size() == partitions_.size(), ErrorCode::kDimensionMismatch,
                    "every image needs exactly one partition");
    detail::require_unique_ids(ids_);
  }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<Partition>& partitions() const noexcept { return partitions_; }
  std::uint64_t seed() const noexcept { return seed_; }

  SplitCounts counts() const {
    SplitCounts c;
    for (const auto p : partitions_) {
      switch (p) {
        case Partition::kTraining: ++c.training; break;
        case Partition::kValidation: ++c.validation; break;
        case Partition::kTesting: ++c.testing; break;
      }
    }
    return c;
  }

  std::vector<std::string> members(Partition p) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (partitions_[i] == p) out.push_back(ids_[i]);
    }
    return out;
  }

  bool operator==(const SplitAssignment&) const = default;

 private:
  std::vector<std::string> ids_;
  std::vector<Partition> partitions_;
  std::uint64_t seed_ = 0;
};

// Seeded uniform permutation followed by contiguous assignment of exactly
// the requested counts.
inline SplitAssignment split_dataset(std::span<const std::string> ids, SplitCounts counts,
                                     std::uint64_t seed) {
  detail::require(counts.total() == ids.size(), ErrorCode::kInvalidArgument,
                  "split counts sum to " + std::to_string(counts.total()) + " but there are " +
                      std::to_string(ids.size()) + " ids");
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  std::vector<Partition> partitions(ids.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    Partition p = Partition::kTesting;
    if (rank < counts.training) {
      p = Partition::kTraining;
    } else if (rank < counts.training + counts.validation) {
      p = Partition::kValidation;
    }
    partitions[order[rank]] = p;
  }
  return SplitAssignment(std::vector<std::string>(ids.begin(), ids.end()), std::move(partitions),
                         seed);
}

class CohortSelector {
 public:
  enum class Kind : std::uint8_t { kExactly, kMoreThanOne, kAll };

  static CohortSelector exactly(std::size_t c) { return CohortSelector(Kind::kExactly, c); }
  static CohortSelector more_than_one() { return CohortSelector(Kind::kMoreThanOne, 0); }
  static CohortSelector all() { return CohortSelector(Kind::kAll, 0); }

  Kind kind() const noexcept { return kind_; }
  std::size_t cardinality() const noexcept { return cardinality_; }

  bool matches(std::size_t image_cardinality) const noexcept {
    switch (kind_) {
      case Kind::kExactly: return image_cardinality == cardinality_;
      case Kind::kMoreThanOne: return image_cardinality > 1;
      case Kind::kAll: return true;
    }
    return false;
  }

  // Display name: "0".."K", ">1", and "0-K" for the whole set.
  std::string name(std::size_t label_count) const {
    switch (kind_) {
      case Kind::kExactly: return std::to_string(cardinality_);
      case Kind::kMoreThanOne: return ">1";
      case Kind::kAll: return "0-" + std::to_string(label_count);
    }
    return "?";
  }

  static std::optional<CohortSelector> parse(std::string_view s, std::size_t label_count) {
    if (s == ">1") return more_than_one();
    if (s == "All" || s == "0-" + std::to_string(label_count)) return all();
    std::size_t c = 0;
    if (s.empty()) return std::nullopt;
    for (const char ch : s) {
      if (ch < '0' || ch > '9') return std::nullopt;
      c = c * 10 + static_cast<std::size_t>(ch - '0');
    }
    return exactly(c);
  }

  bool operator==(const CohortSelector&) const = default;

 private:
  CohortSelector(Kind kind, std::size_t cardinality) : kind_(kind), cardinality_(cardinality) {}

  Kind kind_;
  std::size_t cardinality_;
};

struct CardinalityCohort {
  CohortSelector selector = CohortSelector::all();
  std::vector<std::size_t> rows;  // indices into the truth matrix
  std::vector<std::string> member_ids;
};

inline CardinalityCohort cohort_by_cardinality(const GroundTruthMatrix& truth,
                                               CohortSelector selector) {
  detail::require(
      selector.kind() != CohortSelector::Kind::kExactly ||
          selector.cardinality() <= truth.label_count(),
      ErrorCode::kInvalidArgument,
      "cohort cardinality " + std::to_string(selector.cardinality()) + " exceeds label count " +
          std::to_string(truth.label_count()));
  CardinalityCohort cohort{selector, {}, {}};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (selector.matches(truth.cardinality(i))) {
      cohort.rows.push_back(i);
      cohort.member_ids.push_back(truth.image_ids()[i]);
    }
  }
  return cohort;
}

// Exactly(0..K), MoreThanOne, All.
inline std::vector<CohortSelector> standard_selectors(std::size_t label_count) {
  std::vector<CohortSelector> out;
  for (std::size_t c = 0; c <= label_count; ++c) out.push_back(CohortSelector::exactly(c));
  out.push_back(CohortSelector::more_than_one());
  out.push_back(CohortSelector::all());
  return out;
}

inline std::vector<CardinalityCohort> standard_cohorts(const GroundTruthMatrix& truth) {
  std::vector<CardinalityCohort> out;
  for (const auto& sel : standard_selectors(truth.label_count())) {
    out.push_back(cohort_by_cardinality(truth, sel));
  }
  return out;
}

}  // namespace labeleval
