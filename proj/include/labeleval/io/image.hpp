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

// Raster codecs: 8-bit PGM (P2/P5) and PNG via libpng's simplified API.
// Any PNG colour type is read and reduced to 8-bit grayscale.

#pragma once

#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <png.h>

#include "labeleval/error.hpp"
#include "labeleval/io/file.hpp"
#include "labeleval/lam.hpp"

namespace labeleval::io {

namespace detail {

class PgmReader {
 public:
  PgmReader(std::string_view bytes, const std::string& source) : bytes_(bytes), source_(source) {}

  std::size_t next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw ParseError(source_, 1, pos_ + 1, "expected an integer in PGM header");
    }
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_++] - '0');
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::string_view bytes_;
  const std::string& source_;
  std::size_t pos_ = 2;
};

}  // namespace detail

inline GrayImage parse_pgm(std::string_view bytes, const std::string& source = "<pgm>") {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw ParseError(source, 1, 1, "not a PGM file");
  }
  const bool binary = bytes[1] == '5';
  detail::PgmReader reader(bytes, source);
  GrayImage img;
  img.width = reader.next_int();
  img.height = reader.next_int();
  const std::size_t maxval = reader.next_int();
  if (maxval == 0 || maxval > 255) throw ParseError(source, 1, reader.pos(), "only 8-bit PGM");
  const std::size_t n = img.width * img.height;
  img.pixels.resize(n);
  const auto scale = [maxval](std::size_t v) {
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  };
  if (binary) {
    reader.advance(1);  // single whitespace after maxval
    if (bytes.size() - std::min(bytes.size(), reader.pos()) < n) {
      throw ParseError(source, 1, bytes.size(), "truncated PGM raster");
    }
    for (std::size_t i = 0; i < n; ++i) {
      img.pixels[i] = scale(static_cast<unsigned char>(bytes[reader.pos() + i]));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v = reader.next_int();
      if (v > maxval) throw ParseError(source, 1, reader.pos(), "sample exceeds maxval");
      img.pixels[i] = scale(v);
    }
  }
  return img;
}

inline std::string write_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

inline GrayImage parse_png_gray(std::string_view bytes, const std::string& source = "<png>") {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw ParseError(source, 1, 1, std::string("PNG decode failed: ") + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage img;
  img.width = image.width;
  img.height = image.height;
  img.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw ParseError(source, 1, 1, "PNG decode failed: " + message);
  }
  return img;
}

namespace detail {

inline std::string encode_png(const void* pixels, std::size_t width, std::size_t height,
                              png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, pixels, 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace detail

inline std::string write_png(const RgbImage& img) {
  labeleval::detail::require(img.pixels.size() == 3 * img.width * img.height && img.width > 0,
                             ErrorCode::kDimensionMismatch, "RGB pixel count does not match size");
  return detail::encode_png(img.pixels.data(), img.width, img.height, PNG_FORMAT_RGB);
}

inline std::string write_png(const GrayImage& img) {
  labeleval::detail::require(img.pixels.size() == img.width * img.height && img.width > 0,
                             ErrorCode::kDimensionMismatch, "gray pixel count does not match size");
  return detail::encode_png(img.pixels.data(), img.width, img.height, PNG_FORMAT_GRAY);
}

// Reads a PGM or PNG file (sniffed by magic bytes) as 8-bit grayscale.
inline GrayImage load_gray_image(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), "\x89PNG\r\n\x1a\n", 8) == 0) {
    return parse_png_gray(bytes, path.string());
  }
  return parse_pgm(bytes, path.string());
}

}  // namespace labeleval::io
