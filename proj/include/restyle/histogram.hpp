/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <algorithm>
#include <array>

#include "restyle/image.hpp"

namespace restyle {

/// Normalized 8x8x8 RGB histogram (512 bins summing to one).
struct Histogram {
  std::array<double, 512> bins{};
};

inline int histogram_bin(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return ((r >> 5) << 6) | ((g >> 5) << 3) | (b >> 5);
}

inline Histogram color_histogram(const Frame& f) {
  Histogram h;
  const std::size_t n = static_cast<std::size_t>(f.width) * f.height;
  const std::uint8_t* p = f.pixels.data();
  for (std::size_t i = 0; i < n; ++i, p += 3)
    h.bins[static_cast<std::size_t>(histogram_bin(p[0], p[1], p[2]))] += 1.0;
  if (n > 0)
    for (double& b : h.bins) b /= static_cast<double>(n);
  return h;
}

/// One minus histogram intersection; a bounded distance in [0, 1].
inline double hist_distance(const Histogram& a, const Histogram& b) {
  double inter = 0.0;
  for (std::size_t i = 0; i < a.bins.size(); ++i)
    inter += std::min(a.bins[i], b.bins[i]);
  double d = 1.0 - inter;
  return d < 0.0 ? 0.0 : (d > 1.0 ? 1.0 : d);
}

}  // namespace restyle
