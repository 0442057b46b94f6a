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
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "restyle/common.hpp"
#include "restyle/image.hpp"

// FAST-9 corners, 256-bit binary descriptors over a baked comparison
// pattern, and ratio-tested cross-checked Hamming matching. Matching is
// exhaustive at desk scale and switches to LSH bucketing on 32-bit
// substrings for large descriptor sets.

namespace restyle {

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double score = 0.0;
  bool is_foreground = false;
};

struct Descriptor {
  std::array<std::uint64_t, 4> bits{};

  int hamming(const Descriptor& o) const {
    int d = 0;
    for (int i = 0; i < 4; ++i) d += std::popcount(bits[i] ^ o.bits[i]);
    return d;
  }
};

/// Descriptors for the subset of keypoints far enough from the border;
/// kept[i] is the input index described by descriptors[i].
struct DescriptorSet {
  std::vector<Descriptor> descriptors;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> dropped;
};

struct MatchSet {
  struct Pair {
    std::size_t a = 0;
    std::size_t b = 0;
    int distance = 0;
  };
  std::vector<Pair> pairs;
};

namespace detail {

// Bresenham ring of radius 3, clockwise from 12 o'clock.
inline constexpr int kRingDx[16] = {0, 1, 2, 3, 3, 3, 2, 1,
                                    0, -1, -2, -3, -3, -3, -2, -1};
inline constexpr int kRingDy[16] = {-3, -3, -2, -1, 0, 1, 2, 3,
                                    3, 3, 2, 1, 0, -1, -2, -3};

// FAST segment test: does the ring around (x, y) contain >= 9 contiguous
// pixels all brighter than c+t or all darker than c-t? Returns the corner
// score (sum of |I-c|-t over the strongest qualifying arc), or 0.
inline double fast_score(const GrayImage& img, int x, int y, int t) {
  const int c = img.at(x, y);
  int state[16];
  int diff[16];
  for (int i = 0; i < 16; ++i) {
    int v = img.at(x + kRingDx[i], y + kRingDy[i]);
    diff[i] = v - c;
    state[i] = diff[i] > t ? 1 : (diff[i] < -t ? -1 : 0);
  }
  double best = 0.0;
  for (int sign : {1, -1}) {
    int run = 0;
    double sum = 0.0;
    double best_sum = 0.0;
    int best_run = 0;
    // Scan twice around to handle wrap.
    for (int i = 0; i < 32; ++i) {
      if (state[i & 15] == sign) {
        ++run;
        sum += std::abs(diff[i & 15]) - t;
        if (run >= 9 && (run > best_run || sum > best_sum)) {
          best_run = run;
          best_sum = sum;
        }
        if (run >= 16) break;  // full ring
      } else {
        run = 0;
        sum = 0.0;
      }
    }
    if (best_run >= 9 && best_sum > best) best = best_sum;
  }
  return best;
}

}  // namespace detail

/// FAST-9 corner detection with 3x3 non-maximum suppression. Returns up
/// to max_points keypoints ordered by descending score.
inline std::vector<Keypoint> fast_detect(const GrayImage& img, int threshold,
                                         int max_points) {
  if (img.width < 7 || img.height < 7)
    throw Error("fast_detect: image smaller than 7x7");
  if (threshold < 1) throw Error("fast_detect: threshold must be >= 1");
  const int w = img.width, h = img.height;
  std::vector<float> score(static_cast<std::size_t>(w) * h, 0.0f);
  for (int y = 3; y < h - 3; ++y)
    for (int x = 3; x < w - 3; ++x)
      score[static_cast<std::size_t>(y) * w + x] =
          static_cast<float>(detail::fast_score(img, x, y, threshold));

  std::vector<Keypoint> out;
  auto sc = [&](int x, int y) -> float {
    return score[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 3; y < h - 3; ++y) {
    for (int x = 3; x < w - 3; ++x) {
      float s = sc(x, y);
      if (s <= 0.0f) continue;
      // 3x3 NMS; raster-earlier neighbors win ties so plateaus keep one point.
      bool keep = true;
      for (int dy = -1; dy <= 1 && keep; ++dy) {
        for (int dx = -1; dx <= 1 && keep; ++dx) {
          if (dx == 0 && dy == 0) continue;
          float n = sc(x + dx, y + dy);
          if (n > s || (n == s && (dy < 0 || (dy == 0 && dx < 0)))) keep = false;
        }
      }
      if (keep) out.push_back({static_cast<double>(x), static_cast<double>(y),
                               static_cast<double>(s), false});
    }
  }
  std::sort(out.begin(), out.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  if (max_points >= 0 && out.size() > static_cast<std::size_t>(max_points))
    out.resize(static_cast<std::size_t>(max_points));
  return out;
}

/// Flags keypoints that fall inside any of the given boxes.
template <typename BoxRange>
inline void mark_foreground(std::vector<Keypoint>& points,
                            const BoxRange& boxes) {
  for (Keypoint& kp : points)
    for (const auto& b : boxes)
      if (kp.x >= b.x && kp.x < b.x + b.w && kp.y >= b.y && kp.y < b.y + b.h) {
        kp.is_foreground = true;
        break;
      }
}

namespace detail {

struct BriefPattern {
  std::array<std::int8_t, 256> ux, uy, vx, vy;
};

// Comparison pattern drawn once from a fixed-seed generator and baked for
// every descriptor; offsets stay within +/-13 so a 16 px border margin
// covers both the pattern and the 5x5 pre-smoothing window.
inline const BriefPattern& brief_pattern() {
  static const BriefPattern pattern = [] {
    BriefPattern p{};
    std::mt19937 rng(0x9e3779b9u);
    auto draw = [&rng] {
      return static_cast<std::int8_t>(static_cast<int>(rng() % 27) - 13);
    };
    for (int k = 0; k < 256; ++k) {
      do {
        p.ux[k] = draw();
        p.uy[k] = draw();
        p.vx[k] = draw();
        p.vy[k] = draw();
      } while (p.ux[k] == p.vx[k] && p.uy[k] == p.vy[k]);
    }
    return p;
  }();
  return pattern;
}

// Integral image with a one-pixel zero border: sums are over [x0,x1)x[y0,y1).
struct Integral {
  int width = 0, height = 0;
  std::vector<std::uint64_t> sums;

  explicit Integral(const GrayImage& img)
      : width(img.width), height(img.height),
        sums(static_cast<std::size_t>(img.width + 1) * (img.height + 1), 0) {
    const int stride = width + 1;
    for (int y = 0; y < height; ++y) {
      std::uint64_t row = 0;
      for (int x = 0; x < width; ++x) {
        row += img.at(x, y);
        sums[static_cast<std::size_t>(y + 1) * stride + (x + 1)] =
            sums[static_cast<std::size_t>(y) * stride + (x + 1)] + row;
      }
    }
  }

  std::uint64_t box5(int cx, int cy) const {
    const int stride = width + 1;
    int x0 = cx - 2, y0 = cy - 2, x1 = cx + 3, y1 = cy + 3;
    return sums[static_cast<std::size_t>(y1) * stride + x1] -
           sums[static_cast<std::size_t>(y0) * stride + x1] -
           sums[static_cast<std::size_t>(y1) * stride + x0] +
           sums[static_cast<std::size_t>(y0) * stride + x0];
  }
};

}  // namespace detail

inline constexpr int kDescribeMargin = 16;

/// 256-bit binary descriptors: bit k is [S(p+u_k) < S(p+v_k)] where S is
/// the 5x5 box sum of the image. Points closer than 16 px to the border
/// are dropped and reported via DescriptorSet::dropped.
inline DescriptorSet describe(const GrayImage& img,
                              std::span<const Keypoint> points) {
  const detail::BriefPattern& pat = detail::brief_pattern();
  detail::Integral integral(img);
  DescriptorSet out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    int x = static_cast<int>(std::lround(points[i].x));
    int y = static_cast<int>(std::lround(points[i].y));
    if (x < kDescribeMargin || y < kDescribeMargin ||
        x >= img.width - kDescribeMargin || y >= img.height - kDescribeMargin) {
      out.dropped.push_back(i);
      continue;
    }
    Descriptor d;
    for (int k = 0; k < 256; ++k) {
      std::uint64_t a = integral.box5(x + pat.ux[k], y + pat.uy[k]);
      std::uint64_t b = integral.box5(x + pat.vx[k], y + pat.vy[k]);
      if (a < b) d.bits[static_cast<std::size_t>(k >> 6)] |=
          (std::uint64_t{1} << (k & 63));
    }
    out.descriptors.push_back(d);
    out.kept.push_back(i);
  }
  return out;
}

namespace detail {

inline constexpr std::size_t kLshCutover = 2000;

// Nearest and second-nearest Hamming distances from q into set, restricted
// to `candidates` (or the whole set when candidates is null).
inline void nearest_two(const Descriptor& q, std::span<const Descriptor> set,
                        const std::vector<std::uint32_t>* candidates,
                        std::size_t& best_idx, int& best_d, int& second_d) {
  best_idx = std::numeric_limits<std::size_t>::max();
  best_d = std::numeric_limits<int>::max();
  second_d = std::numeric_limits<int>::max();
  auto consider = [&](std::size_t j) {
    int d = q.hamming(set[j]);
    if (d < best_d || (d == best_d && j < best_idx)) {
      second_d = best_d;
      best_d = d;
      best_idx = j;
    } else if (d < second_d) {
      second_d = d;
    }
  };
  if (candidates) {
    for (std::uint32_t j : *candidates) consider(j);
  } else {
    for (std::size_t j = 0; j < set.size(); ++j) consider(j);
  }
}

// LSH index: 8 hash tables keyed by the descriptor's 32-bit substrings.
struct LshIndex {
  std::array<std::unordered_map<std::uint32_t, std::vector<std::uint32_t>>, 8>
      bands;

  explicit LshIndex(std::span<const Descriptor> set) {
    for (std::size_t j = 0; j < set.size(); ++j)
      for (int band = 0; band < 8; ++band)
        bands[static_cast<std::size_t>(band)][band_key(set[j], band)]
            .push_back(static_cast<std::uint32_t>(j));
  }

  static std::uint32_t band_key(const Descriptor& d, int band) {
    std::uint64_t word = d.bits[static_cast<std::size_t>(band >> 1)];
    return static_cast<std::uint32_t>((band & 1) ? (word >> 32) : word);
  }

  std::vector<std::uint32_t> candidates(const Descriptor& q) const {
    std::vector<std::uint32_t> out;
    for (int band = 0; band < 8; ++band) {
      auto it = bands[static_cast<std::size_t>(band)].find(band_key(q, band));
      if (it != bands[static_cast<std::size_t>(band)].end())
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

// Best match index in `to` for every descriptor of `from`; -1 when the
// ratio test fails or no candidate exists.
inline std::vector<std::int64_t> directed_matches(
    std::span<const Descriptor> from, std::span<const Descriptor> to,
    double ratio, std::vector<int>* distances) {
  std::vector<std::int64_t> out(from.size(), -1);
  if (to.empty()) return out;
  const bool use_lsh = std::max(from.size(), to.size()) >= kLshCutover;
  std::unique_ptr<LshIndex> index;
  if (use_lsh) index = std::make_unique<LshIndex>(to);
  for (std::size_t i = 0; i < from.size(); ++i) {
    std::size_t best_idx;
    int best_d, second_d;
    if (use_lsh) {
      std::vector<std::uint32_t> cand = index->candidates(from[i]);
      if (cand.empty()) continue;
      nearest_two(from[i], to, &cand, best_idx, best_d, second_d);
    } else {
      nearest_two(from[i], to, nullptr, best_idx, best_d, second_d);
    }
    bool pass = second_d == std::numeric_limits<int>::max()
                    ? true
                    : static_cast<double>(best_d) < ratio * second_d;
    if (pass) {
      out[i] = static_cast<std::int64_t>(best_idx);
      if (distances) (*distances)[i] = best_d;
    }
  }
  return out;
}

}  // namespace detail

/// Ratio-tested nearest-neighbor matching with a cross check, yielding a
/// one-to-one pairing from descriptor set a into set b.
inline MatchSet match(std::span<const Descriptor> a,
                      std::span<const Descriptor> b, double ratio) {
  if (!(ratio > 0.0) || !(ratio < 1.0))
    throw Error("match: ratio must lie in (0, 1)");
  MatchSet out;
  if (a.empty() || b.empty()) return out;
  std::vector<int> fwd_dist(a.size(), 0);
  std::vector<std::int64_t> fwd = detail::directed_matches(a, b, ratio,
                                                           &fwd_dist);
  std::vector<std::int64_t> rev = detail::directed_matches(b, a, ratio,
                                                           nullptr);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t j = fwd[i];
    if (j < 0) continue;
    if (rev[static_cast<std::size_t>(j)] != static_cast<std::int64_t>(i))
      continue;
    out.pairs.push_back({i, static_cast<std::size_t>(j), fwd_dist[i]});
  }
  return out;
}

}  // namespace restyle
