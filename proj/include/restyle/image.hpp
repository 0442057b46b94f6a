/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "restyle/common.hpp"

namespace restyle {

/// One decoded video frame: interleaved 8-bit RGB, row major.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3 bytes
  int index = 0;                     // ordinal within its sequence

  std::uint8_t* px(int x, int y) {
    return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  const std::uint8_t* px(int x, int y) const {
    return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
};

inline Frame make_frame(int width, int height, std::uint8_t r = 0,
                        std::uint8_t g = 0, std::uint8_t b = 0) {
  if (width <= 0 || height <= 0)
    throw Error("make_frame: nonpositive dimensions");
  Frame f;
  f.width = width;
  f.height = height;
  f.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
    f.pixels[i] = r;
    f.pixels[i + 1] = g;
    f.pixels[i + 2] = b;
  }
  return f;
}

inline void validate_frame(const Frame& f) {
  if (f.width <= 0 || f.height <= 0)
    throw Error("frame: nonpositive dimensions");
  if (f.pixels.size() != static_cast<std::size_t>(f.width) * f.height * 3)
    throw Error("frame: pixel buffer size does not match dimensions");
}

/// Single-channel 8-bit image (luma plane).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

/// An ordered run of same-sized frames with a frame rate.
struct FrameSequence {
  std::vector<Frame> frames;
  Fraction frame_rate{25, 1};
  std::string source_id;

  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
  std::size_t size() const { return frames.size(); }
  double aspect() const {
    return height() > 0 ? static_cast<double>(width()) / height() : 0.0;
  }
};

inline void validate_sequence(const FrameSequence& seq) {
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const Frame& f = seq.frames[i];
    validate_frame(f);
    if (f.width != seq.width() || f.height != seq.height())
      throw Error("sequence: mixed frame dimensions at frame " +
                  std::to_string(i));
    if (f.index != static_cast<int>(i))
      throw Error("sequence: nonconsecutive frame index at frame " +
                  std::to_string(i));
  }
  if (seq.frame_rate.num <= 0 || seq.frame_rate.den <= 0)
    throw Error("sequence: nonpositive frame rate");
}

/// BT.601 luma, rounded: Y = 0.299 R + 0.587 G + 0.114 B.
inline std::uint8_t luma_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  int y = (299 * r + 587 * g + 114 * b + 500) / 1000;
  return static_cast<std::uint8_t>(y < 0 ? 0 : (y > 255 ? 255 : y));
}

inline GrayImage luma(const Frame& f) {
  GrayImage g;
  g.width = f.width;
  g.height = f.height;
  g.data.resize(static_cast<std::size_t>(f.width) * f.height);
  const std::uint8_t* p = f.pixels.data();
  for (std::size_t i = 0; i < g.data.size(); ++i, p += 3)
    g.data[i] = luma_of(p[0], p[1], p[2]);
  return g;
}

inline double mean_luma(const Frame& f) {
  const std::uint8_t* p = f.pixels.data();
  std::uint64_t sum = 0;
  std::size_t n = static_cast<std::size_t>(f.width) * f.height;
  for (std::size_t i = 0; i < n; ++i, p += 3) sum += luma_of(p[0], p[1], p[2]);
  return n > 0 ? static_cast<double>(sum) / static_cast<double>(n) : 0.0;
}

/// Bilinear RGB sample at continuous (x, y); pixel centers sit on integer
/// coordinates. Returns false (and leaves `out` untouched) outside
/// [0, w-1] x [0, h-1].
inline bool sample_bilinear(const Frame& f, double x, double y,
                            std::uint8_t out[3]) {
  if (!(x >= 0.0) || !(y >= 0.0) || !(x <= f.width - 1) ||
      !(y <= f.height - 1))
    return false;
  int x0 = static_cast<int>(x);
  int y0 = static_cast<int>(y);
  if (x0 > f.width - 2) x0 = f.width - 2;
  if (y0 > f.height - 2) y0 = f.height - 2;
  if (x0 < 0) x0 = 0;
  if (y0 < 0) y0 = 0;
  double fx = x - x0;
  double fy = y - y0;
  int x1 = f.width > 1 ? x0 + 1 : x0;
  int y1 = f.height > 1 ? y0 + 1 : y0;
  const std::uint8_t* p00 = f.px(x0, y0);
  const std::uint8_t* p10 = f.px(x1, y0);
  const std::uint8_t* p01 = f.px(x0, y1);
  const std::uint8_t* p11 = f.px(x1, y1);
  for (int c = 0; c < 3; ++c) {
    double v = (1 - fx) * (1 - fy) * p00[c] + fx * (1 - fy) * p10[c] +
               (1 - fx) * fy * p01[c] + fx * fy * p11[c];
    long r = std::lround(v);
    out[c] = static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
  }
  return true;
}

}  // namespace restyle
