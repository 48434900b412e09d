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

// Label activation maps: the per-label weighted sum of penultimate feature
// map channels, min-max normalized, bilinearly upsampled and blended over a
// grayscale image through a fixed colormap.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "labeleval/colormap.hpp"
#include "labeleval/error.hpp"

namespace labeleval {

// C x H x W activations, row-major.
struct FeatureMapDump {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> data;
  std::string source_image_id;
  std::size_t source_height = 0;
  std::size_t source_width = 0;

  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * height + y) * width + x];
  }

  void validate() const {
    detail::require(data.size() == channels * height * width, ErrorCode::kDimensionMismatch,
                    "feature map length does not match C*H*W");
    for (const float v : data) {
      detail::require(std::isfinite(v), ErrorCode::kNonFinite, "non-finite feature value");
    }
  }

  bool operator==(const FeatureMapDump&) const = default;
};

// K x C classification-head weights, one row per label.
struct HeadWeights {
  std::size_t labels = 0;
  std::size_t channels = 0;
  std::vector<float> weights;
  std::vector<std::string> label_names;

  std::span<const float> row(std::size_t k) const {
    return std::span<const float>(weights).subspan(k * channels, channels);
  }

  void validate() const {
    detail::require(weights.size() == labels * channels, ErrorCode::kDimensionMismatch,
                    "head weight length does not match K*C");
    detail::require(label_names.empty() || label_names.size() == labels,
                    ErrorCode::kDimensionMismatch, "label names do not match the weight rows");
    for (const float v : weights) {
      detail::require(std::isfinite(v), ErrorCode::kNonFinite, "non-finite head weight");
    }
  }

  bool operator==(const HeadWeights&) const = default;
};

struct ActivationMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> raw;
  std::vector<double> normalized;  // in [0, 1]
  std::size_t label_index = 0;

  double raw_at(std::size_t y, std::size_t x) const { return raw[y * width + x]; }
  double normalized_at(std::size_t y, std::size_t x) const { return normalized[y * width + x]; }
};

// (v - min) / (max - min); a constant map becomes 0.5 everywhere.
inline std::vector<double> min_max_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double max = *hi;
  if (!(max > min)) return out;
  const double range = max - min;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / range;
  return out;
}

// raw(y, x) = bias + sum_c weights[c] * features(c, y, x), accumulated in
// double in channel order. The normalized map ignores the bias.
inline ActivationMap compute_lam(const FeatureMapDump& features, std::span<const double> weights,
                                 std::size_t label_index = 0, double bias = 0.0) {
  features.validate();
  detail::require(weights.size() == features.channels, ErrorCode::kChannelMismatch,
                  "weight vector has " + std::to_string(weights.size()) +
                      " channels but the feature map has " + std::to_string(features.channels));
  for (const double w : weights) {
    detail::require(std::isfinite(w), ErrorCode::kNonFinite, "non-finite weight");
  }
  detail::require(std::isfinite(bias), ErrorCode::kNonFinite, "non-finite bias");

  ActivationMap map;
  map.height = features.height;
  map.width = features.width;
  map.label_index = label_index;
  const std::size_t plane = features.height * features.width;
  map.raw.assign(plane, 0.0);
  for (std::size_t c = 0; c < features.channels; ++c) {
    const double w = weights[c];
    const float* channel = features.data.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) map.raw[i] += w * static_cast<double>(channel[i]);
  }
  // A constant offset cancels under min-max, so normalize before adding it;
  // that keeps the normalized map bit-identical for every bias.
  map.normalized = min_max_normalize(map.raw);
  if (bias != 0.0) {
    for (auto& v : map.raw) v += bias;
  }
  return map;
}

inline ActivationMap compute_lam(const FeatureMapDump& features, const HeadWeights& head,
                                 std::size_t label) {
  head.validate();
  detail::require(label < head.labels, ErrorCode::kInvalidArgument, "label index out of range");
  detail::require(head.channels == features.channels, ErrorCode::kChannelMismatch,
                  "head weights have " + std::to_string(head.channels) +
                      " channels but the feature map has " + std::to_string(features.channels));
  const auto row = head.row(label);
  const std::vector<double> w(row.begin(), row.end());
  return compute_lam(features, w, label);
}

namespace detail {

// Bilinear resampling with corner alignment: output corners sample input
// corners exactly.
inline std::vector<double> resize_bilinear(std::span<const double> src, std::size_t h,
                                           std::size_t w, std::size_t th, std::size_t tw) {
  std::vector<double> out(th * tw);
  const double sy = th > 1 ? static_cast<double>(h - 1) / static_cast<double>(th - 1) : 0.0;
  const double sx = tw > 1 ? static_cast<double>(w - 1) / static_cast<double>(tw - 1) : 0.0;
  for (std::size_t y = 0; y < th; ++y) {
    const double fy = static_cast<double>(y) * sy;
    const auto y0 = std::min(static_cast<std::size_t>(fy), h - 1);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double ay = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < tw; ++x) {
      const double fx = static_cast<double>(x) * sx;
      const auto x0 = std::min(static_cast<std::size_t>(fx), w - 1);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double ax = fx - static_cast<double>(x0);
      const double top = src[y0 * w + x0] + ax * (src[y0 * w + x1] - src[y0 * w + x0]);
      const double bottom = src[y1 * w + x0] + ax * (src[y1 * w + x1] - src[y1 * w + x0]);
      double v = top + ay * (bottom - top);
      // Interpolation cannot leave the hull of its four inputs; clamp away
      // rounding so the range invariant holds bit-for-bit.
      const double lo = std::min({src[y0 * w + x0], src[y0 * w + x1], src[y1 * w + x0],
                                  src[y1 * w + x1]});
      const double hi = std::max({src[y0 * w + x0], src[y0 * w + x1], src[y1 * w + x0],
                                  src[y1 * w + x1]});
      out[y * tw + x] = std::clamp(v, lo, hi);
    }
  }
  return out;
}

}  // namespace detail

inline ActivationMap upsample(const ActivationMap& map, std::size_t height, std::size_t width) {
  detail::require(height > 0 && width > 0, ErrorCode::kInvalidArgument, "zero-sized target");
  detail::require(map.height > 0 && map.width > 0, ErrorCode::kInvalidArgument, "empty map");
  detail::require(height >= map.height && width >= map.width, ErrorCode::kInvalidArgument,
                  "upsample target is smaller than the map");
  ActivationMap out;
  out.height = height;
  out.width = width;
  out.label_index = map.label_index;
  out.raw = detail::resize_bilinear(map.raw, map.height, map.width, height, width);
  out.normalized = detail::resize_bilinear(map.normalized, map.height, map.width, height, width);
  return out;
}

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  bool operator==(const GrayImage&) const = default;
};

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, interleaved RGB

  bool operator==(const RgbImage&) const = default;
};

inline Rgb colormap_lookup(double normalized) {
  const double v = std::clamp(normalized, 0.0, 1.0);
  return kBlueRedColormap[static_cast<std::size_t>(std::floor(v * 255.0 + 0.5))];
}

// Alpha-blends the colormapped normalized map over the grayscale base:
// out = round((1 - opacity) * base + opacity * colormap).
inline RgbImage render_overlay(const ActivationMap& map, const GrayImage& base,
                               double opacity = 0.5) {
  detail::require(std::isfinite(opacity) && opacity >= 0.0 && opacity <= 1.0,
                  ErrorCode::kInvalidArgument, "opacity must lie in [0, 1]");
  detail::require(map.height == base.height && map.width == base.width,
                  ErrorCode::kDimensionMismatch,
                  "activation map is " + std::to_string(map.height) + "x" +
                      std::to_string(map.width) + " but the base image is " +
                      std::to_string(base.height) + "x" + std::to_string(base.width));
  detail::require(base.pixels.size() == base.width * base.height, ErrorCode::kDimensionMismatch,
                  "base image pixel count does not match its size");
  RgbImage out;
  out.width = base.width;
  out.height = base.height;
  out.pixels.resize(base.pixels.size() * 3);
  const auto blend = [opacity](std::uint8_t under, std::uint8_t over) {
    const double v = (1.0 - opacity) * under + opacity * over;
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
  };
  for (std::size_t i = 0; i < base.pixels.size(); ++i) {
    const Rgb c = colormap_lookup(map.normalized[i]);
    const std::uint8_t g = base.pixels[i];
    out.pixels[3 * i + 0] = blend(g, c.r);
    out.pixels[3 * i + 1] = blend(g, c.g);
    out.pixels[3 * i + 2] = blend(g, c.b);
  }
  return out;
}

}  // namespace labeleval
