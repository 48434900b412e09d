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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace labeleval {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kMisaligned,
  kDegenerate,
  kUndefined,
  kParse,
  kIo,
  kChannelMismatch,
  kNonFinite,
  kSelfCheck,
  kIncompatible,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kMisaligned: return "misaligned";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kChannelMismatch: return "channel_mismatch";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kSelfCheck: return "self_check_failed";
    case ErrorCode::kIncompatible: return "incompatible";
  }
  return "unknown";
}

// All library failures are reported with this exception type. The code is
// stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the 1-based line and column (field index for
// delimited text, byte offset for binary payloads) of the first problem.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column,
             const std::string& what)
      : Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ":" +
                                     std::to_string(column) + ": " + what),
        source_(std::move(source)),
        line_(line),
        column_(column) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace detail
}  // namespace labeleval
