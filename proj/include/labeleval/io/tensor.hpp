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

// Tensor dump files.
//
// A single UTF-8 JSON object on the first line, terminated by '\n':
//
//   {"byte_order":"little","dtype":"f32","layout":"row-major","shape":[C,H,W]}
//
// followed by exactly prod(shape) IEEE-754 binary32 values, little-endian.
// Feature maps use shape [C,H,W] and may add "source_image_id" and
// "source_image_size":[height,width]; head weights use shape [K,C] and may
// add "labels":[...]. Unknown keys are preserved.
//
// The canonical header is compact JSON with keys in lexicographic order.
// Files written by write_tensor re-serialize byte-identically after parsing.

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "labeleval/error.hpp"
#include "labeleval/io/file.hpp"
#include "labeleval/lam.hpp"

namespace labeleval::io {

struct TensorDump {
  std::vector<std::size_t> shape;
  std::vector<float> data;
  nlohmann::json extra = nlohmann::json::object();  // non-structural header keys

  std::size_t element_count() const {
    std::size_t n = 1;
    for (const auto d : shape) n *= d;
    return n;
  }

  bool operator==(const TensorDump& o) const {
    if (shape != o.shape || extra != o.extra || data.size() != o.data.size()) return false;
    return std::memcmp(data.data(), o.data.data(), data.size() * sizeof(float)) == 0;
  }
};

inline std::string write_tensor(const TensorDump& t) {
  labeleval::detail::require(!t.shape.empty(), ErrorCode::kInvalidArgument, "tensor has no shape");
  labeleval::detail::require(t.data.size() == t.element_count(), ErrorCode::kDimensionMismatch,
                             "tensor data length does not match its shape");
  nlohmann::json header = t.extra;
  header["dtype"] = "f32";
  header["layout"] = "row-major";
  header["byte_order"] = "little";
  header["shape"] = t.shape;
  std::string out = header.dump();
  out += '\n';
  const std::size_t offset = out.size();
  out.resize(offset + 4 * t.data.size());
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &t.data[i], 4);
    for (int b = 0; b < 4; ++b) {
      out[offset + 4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
    }
  }
  return out;
}

inline TensorDump parse_tensor(std::string_view bytes, const std::string& source = "<tensor>") {
  const std::size_t newline = bytes.find('\n');
  if (newline == std::string_view::npos) throw ParseError(source, 1, 1, "missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(0, newline));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 1, e.byte, "header is not valid JSON");
  }
  if (!header.is_object()) throw ParseError(source, 1, 1, "header must be a JSON object");
  const auto expect = [&](const char* key, const char* value) {
    const auto it = header.find(key);
    if (it == header.end() || !it->is_string() || it->get<std::string>() != value) {
      throw ParseError(source, 1, 1, std::string("header needs \"") + key + "\":\"" + value + "\"");
    }
  };
  expect("dtype", "f32");
  expect("layout", "row-major");
  expect("byte_order", "little");

  TensorDump t;
  const auto shape = header.find("shape");
  if (shape == header.end() || !shape->is_array() || shape->empty()) {
    throw ParseError(source, 1, 1, "header needs a non-empty \"shape\" array");
  }
  for (const auto& d : *shape) {
    if (!d.is_number_unsigned()) throw ParseError(source, 1, 1, "shape entries must be unsigned");
    t.shape.push_back(d.get<std::size_t>());
  }
  for (auto it = header.begin(); it != header.end(); ++it) {
    if (it.key() != "dtype" && it.key() != "layout" && it.key() != "byte_order" &&
        it.key() != "shape") {
      t.extra[it.key()] = it.value();
    }
  }

  const std::string_view payload = bytes.substr(newline + 1);
  const std::size_t count = t.element_count();
  if (payload.size() != 4 * count) {
    throw ParseError(source, 2, std::min(payload.size(), 4 * count) + 1,
                     "payload has " + std::to_string(payload.size()) + " bytes, header declares " +
                         std::to_string(4 * count));
  }
  t.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(payload[4 * i + b])) << (8 * b);
    }
    std::memcpy(&t.data[i], &bits, 4);
  }
  return t;
}

inline TensorDump load_tensor(const std::filesystem::path& path) {
  return parse_tensor(read_file(path), path.string());
}

inline TensorDump to_tensor(const FeatureMapDump& f) {
  f.validate();
  TensorDump t;
  t.shape = {f.channels, f.height, f.width};
  t.data = f.data;
  if (!f.source_image_id.empty()) t.extra["source_image_id"] = f.source_image_id;
  if (f.source_height > 0 && f.source_width > 0) {
    t.extra["source_image_size"] = {f.source_height, f.source_width};
  }
  return t;
}

inline FeatureMapDump to_feature_map(const TensorDump& t) {
  labeleval::detail::require(t.shape.size() == 3, ErrorCode::kDimensionMismatch,
                             "feature maps need shape [C,H,W]");
  FeatureMapDump f;
  f.channels = t.shape[0];
  f.height = t.shape[1];
  f.width = t.shape[2];
  f.data = t.data;
  if (const auto it = t.extra.find("source_image_id"); it != t.extra.end() && it->is_string()) {
    f.source_image_id = it->get<std::string>();
  }
  if (const auto it = t.extra.find("source_image_size");
      it != t.extra.end() && it->is_array() && it->size() == 2) {
    f.source_height = (*it)[0].get<std::size_t>();
    f.source_width = (*it)[1].get<std::size_t>();
  }
  f.validate();
  return f;
}

inline TensorDump to_tensor(const HeadWeights& h) {
  h.validate();
  TensorDump t;
  t.shape = {h.labels, h.channels};
  t.data = h.weights;
  if (!h.label_names.empty()) t.extra["labels"] = h.label_names;
  return t;
}

inline HeadWeights to_head_weights(const TensorDump& t) {
  labeleval::detail::require(t.shape.size() == 2, ErrorCode::kDimensionMismatch,
                             "head weights need shape [K,C]");
  HeadWeights h;
  h.labels = t.shape[0];
  h.channels = t.shape[1];
  h.weights = t.data;
  if (const auto it = t.extra.find("labels"); it != t.extra.end() && it->is_array()) {
    h.label_names = it->get<std::vector<std::string>>();
  }
  h.validate();
  return h;
}

}  // namespace labeleval::io
