/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace restyle {

/// Base class for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent project configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. Carries the byte offset of the first offending byte.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  /// Same error with a context prefix; keeps the already-formatted message.
  static ParseError prefixed(const std::string& prefix, const ParseError& e) {
    return ParseError(prefix + e.what(), e.offset_, 0);
  }

  std::size_t offset() const { return offset_; }

 private:
  ParseError(const std::string& full, std::size_t offset, int)
      : Error(full), offset_(offset) {}

  std::size_t offset_;
};

/// Robust estimation failed to produce a usable model.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Exact rational frame rate, e.g. 30000/1001.
struct Fraction {
  int num = 0;
  int den = 1;

  double as_double() const { return static_cast<double>(num) / den; }
  bool operator==(const Fraction&) const = default;
};

/// Axis-aligned rectangle, half-open is not implied; (x0,y0) is the min
/// corner and (x1,y1) the max corner in continuous coordinates.
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double center_x() const { return 0.5 * (x0 + x1); }
  double center_y() const { return 0.5 * (y0 + y1); }
};

/// FNV-1a 64-bit, used for configuration fingerprints.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace restyle
