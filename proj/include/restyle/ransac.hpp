/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "restyle/common.hpp"
#include "restyle/geometry.hpp"

// Robust two-view geometry: 4-point DLT homographies scored by symmetric
// transfer error and normalized 8-point fundamental matrices scored by
// Sampson distance, both inside a seeded RANSAC loop with the standard
// 99%-confidence adaptive iteration cap.

namespace restyle {

struct HomographyEstimate {
  Homography h;
  std::vector<bool> inliers;
  int inlier_count = 0;
};

struct FundamentalEstimate {
  FundamentalMatrix f;
  std::vector<bool> inliers;
  int inlier_count = 0;
};

namespace detail {

// Hartley normalization: centroid to the origin, mean distance sqrt(2).
inline Mat3 normalize_points(std::span<const Vec2> pts,
                             std::vector<Vec2>& out) {
  Vec2 centroid = Vec2::Zero();
  for (const Vec2& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const Vec2& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (mean_dist < 1e-12)
    throw EstimationError("normalization: points are coincident");
  double s = std::sqrt(2.0) / mean_dist;
  Mat3 t = Mat3::Identity();
  t(0, 0) = s;
  t(1, 1) = s;
  t(0, 2) = -s * centroid.x();
  t(1, 2) = -s * centroid.y();
  out.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    out[i] = (pts[i] - centroid) * s;
  return t;
}

// Smallest-eigenvalue eigenvector of A^T A for the stacked constraint
// rows; cheap and stable once the data is Hartley-normalized.
inline Eigen::Matrix<double, 9, 1> nullspace9(
    const Eigen::Matrix<double, Eigen::Dynamic, 9>& a) {
  Eigen::Matrix<double, 9, 9> ata = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 9, 9>> eig(ata);
  if (eig.info() != Eigen::Success)
    throw EstimationError("dlt: eigen decomposition failed");
  return eig.eigenvectors().col(0);
}

inline bool triple_collinear(const Vec2& a, const Vec2& b, const Vec2& c) {
  double cross = (b.x() - a.x()) * (c.y() - a.y()) -
                 (b.y() - a.y()) * (c.x() - a.x());
  return std::abs(cross) < 2.0;  // triangle area < 1 px^2
}

template <typename Idx>
inline bool sample_degenerate(std::span<const Vec2> src,
                              std::span<const Vec2> dst,
                              std::span<const Idx> idx) {
  const std::size_t k = idx.size();
  for (std::size_t i = 0; i + 2 < k; ++i)
    for (std::size_t j = i + 1; j + 1 < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l) {
        if (triple_collinear(src[idx[i]], src[idx[j]], src[idx[l]]))
          return true;
        if (triple_collinear(dst[idx[i]], dst[idx[j]], dst[idx[l]]))
          return true;
      }
  return false;
}

inline void sample_distinct(std::mt19937_64& rng, std::size_t n,
                            std::size_t k, std::vector<std::size_t>& out) {
  out.clear();
  while (out.size() < k) {
    std::size_t v = static_cast<std::size_t>(rng() % n);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
}

inline int adaptive_iterations(double inlier_ratio, int sample_size,
                               int max_iters) {
  if (inlier_ratio >= 1.0 - 1e-12) return 1;
  double w = std::pow(inlier_ratio, sample_size);
  if (w <= 1e-12) return max_iters;
  double n = std::log(0.01) / std::log(1.0 - w);
  if (!(n > 0.0)) return 1;
  if (n >= static_cast<double>(max_iters)) return max_iters;
  return static_cast<int>(std::ceil(n));
}

}  // namespace detail

/// Normalized DLT homography fit over all given correspondences (>= 4).
inline Homography fit_homography_dlt(std::span<const Vec2> src,
                                     std::span<const Vec2> dst) {
  if (src.size() < 4 || src.size() != dst.size())
    throw EstimationError("dlt: need >= 4 matched correspondences");
  std::vector<Vec2> ns, nd;
  Mat3 ts = detail::normalize_points(src, ns);
  Mat3 td = detail::normalize_points(dst, nd);
  const std::size_t n = src.size();
  Eigen::Matrix<double, Eigen::Dynamic, 9> a(2 * n, 9);
  a.setZero();
  for (std::size_t i = 0; i < n; ++i) {
    double x = ns[i].x(), y = ns[i].y();
    double u = nd[i].x(), v = nd[i].y();
    Eigen::Index r = static_cast<Eigen::Index>(2 * i);
    a(r, 0) = x;
    a(r, 1) = y;
    a(r, 2) = 1.0;
    a(r, 6) = -u * x;
    a(r, 7) = -u * y;
    a(r, 8) = -u;
    a(r + 1, 3) = x;
    a(r + 1, 4) = y;
    a(r + 1, 5) = 1.0;
    a(r + 1, 6) = -v * x;
    a(r + 1, 7) = -v * y;
    a(r + 1, 8) = -v;
  }
  Eigen::Matrix<double, 9, 1> h = detail::nullspace9(a);
  Mat3 hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return Homography::from_matrix((td.inverse() * hn * ts).eval());
}

/// Normalized 8-point fundamental matrix fit (>= 8 correspondences),
/// rank-2 enforced and scaled to unit Frobenius norm.
inline FundamentalMatrix fit_fundamental_8point(std::span<const Vec2> src,
                                                std::span<const Vec2> dst) {
  if (src.size() < 8 || src.size() != dst.size())
    throw EstimationError("8-point: need >= 8 matched correspondences");
  std::vector<Vec2> ns, nd;
  Mat3 ts = detail::normalize_points(src, ns);
  Mat3 td = detail::normalize_points(dst, nd);
  const std::size_t n = src.size();
  Eigen::Matrix<double, Eigen::Dynamic, 9> a(n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    double x1 = ns[i].x(), y1 = ns[i].y();
    double x2 = nd[i].x(), y2 = nd[i].y();
    Eigen::Index r = static_cast<Eigen::Index>(i);
    a(r, 0) = x2 * x1;
    a(r, 1) = x2 * y1;
    a(r, 2) = x2;
    a(r, 3) = y2 * x1;
    a(r, 4) = y2 * y1;
    a(r, 5) = y2;
    a(r, 6) = x1;
    a(r, 7) = y1;
    a(r, 8) = 1.0;
  }
  Eigen::Matrix<double, 9, 1> f = detail::nullspace9(a);
  Mat3 fn;
  fn << f(0), f(1), f(2), f(3), f(4), f(5), f(6), f(7), f(8);
  return FundamentalMatrix::from_matrix((td.transpose() * fn * ts).eval());
}

/// RANSAC homography estimate. A correspondence is an inlier when both
/// the forward and backward transfer distances fall below inlier_px.
/// Deterministic for a fixed seed.
inline HomographyEstimate estimate_homography_ransac(
    std::span<const Vec2> src, std::span<const Vec2> dst, double inlier_px,
    int max_iters, std::uint64_t seed) {
  const std::size_t n = src.size();
  if (n < 4 || dst.size() != n)
    throw EstimationError("homography ransac: fewer than 4 correspondences (" +
                          std::to_string(n) + ")");
  if (!(inlier_px > 0.0))
    throw EstimationError("homography ransac: inlier_px must be positive");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> sample;
  std::vector<Vec2> ssrc(4), sdst(4);

  auto score = [&](const Homography& h, std::vector<bool>& mask) -> int {
    Homography hinv = h.inverse();
    mask.assign(n, false);
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double fwd = (h.apply(src[i]) - dst[i]).norm();
      if (fwd >= inlier_px) continue;
      double bwd = (hinv.apply(dst[i]) - src[i]).norm();
      if (bwd >= inlier_px) continue;
      mask[i] = true;
      ++count;
    }
    return count;
  };

  Homography best_h;
  std::vector<bool> best_mask;
  int best_count = -1;
  bool any_valid_sample = false;
  int cap = std::max(1, max_iters);
  for (int iter = 0; iter < cap; ++iter) {
    detail::sample_distinct(rng, n, 4, sample);
    if (detail::sample_degenerate<std::size_t>(src, dst, sample)) continue;
    any_valid_sample = true;
    for (int i = 0; i < 4; ++i) {
      ssrc[static_cast<std::size_t>(i)] = src[sample[static_cast<std::size_t>(i)]];
      sdst[static_cast<std::size_t>(i)] = dst[sample[static_cast<std::size_t>(i)]];
    }
    Homography h;
    try {
      h = fit_homography_dlt(ssrc, sdst);
    } catch (const EstimationError&) {
      continue;
    }
    std::vector<bool> mask;
    int count = score(h, mask);
    if (count > best_count) {
      best_count = count;
      best_h = h;
      best_mask = std::move(mask);
      int needed = detail::adaptive_iterations(
          static_cast<double>(count) / static_cast<double>(n), 4,
          std::max(1, max_iters));
      cap = std::min(cap, std::max(iter + 1, needed));
    }
  }
  if (!any_valid_sample)
    throw EstimationError(
        "homography ransac: all sampled minimal sets degenerate");
  if (best_count < 4)
    throw EstimationError("homography ransac: no hypothesis reached 4 inliers");

  // Refine with a normalized DLT over every inlier, then rescore.
  std::vector<Vec2> isrc, idst;
  for (std::size_t i = 0; i < n; ++i)
    if (best_mask[i]) {
      isrc.push_back(src[i]);
      idst.push_back(dst[i]);
    }
  try {
    Homography refined = fit_homography_dlt(isrc, idst);
    std::vector<bool> mask;
    int count = score(refined, mask);
    if (count >= 4) {
      best_h = refined;
      best_mask = std::move(mask);
      best_count = count;
    }
  } catch (const EstimationError&) {
    // keep the hypothesis model
  }
  if (best_count < 4)
    throw EstimationError("homography ransac: final inlier count < 4");
  return {best_h, std::move(best_mask), best_count};
}

/// RANSAC fundamental matrix estimate scored by Sampson distance.
/// Deterministic for a fixed seed.
inline FundamentalEstimate estimate_fundamental_ransac(
    std::span<const Vec2> src, std::span<const Vec2> dst, double inlier_px,
    int max_iters, std::uint64_t seed) {
  const std::size_t n = src.size();
  if (n < 8 || dst.size() != n)
    throw EstimationError(
        "fundamental ransac: fewer than 8 correspondences (" +
        std::to_string(n) + ")");
  if (!(inlier_px > 0.0))
    throw EstimationError("fundamental ransac: inlier_px must be positive");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> sample;
  std::vector<Vec2> ssrc(8), sdst(8);

  auto score = [&](const FundamentalMatrix& f, std::vector<bool>& mask) {
    mask.assign(n, false);
    int count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (f.sampson_distance(src[i], dst[i]) < inlier_px) {
        mask[i] = true;
        ++count;
      }
    return count;
  };

  FundamentalMatrix best_f;
  std::vector<bool> best_mask;
  int best_count = -1;
  int cap = std::max(1, max_iters);
  for (int iter = 0; iter < cap; ++iter) {
    detail::sample_distinct(rng, n, 8, sample);
    if (detail::sample_degenerate<std::size_t>(src, dst, sample)) continue;
    for (int i = 0; i < 8; ++i) {
      ssrc[static_cast<std::size_t>(i)] = src[sample[static_cast<std::size_t>(i)]];
      sdst[static_cast<std::size_t>(i)] = dst[sample[static_cast<std::size_t>(i)]];
    }
    FundamentalMatrix f;
    try {
      f = fit_fundamental_8point(ssrc, sdst);
    } catch (const EstimationError&) {
      continue;
    }
    std::vector<bool> mask;
    int count = score(f, mask);
    if (count > best_count) {
      best_count = count;
      best_f = f;
      best_mask = std::move(mask);
      int needed = detail::adaptive_iterations(
          static_cast<double>(count) / static_cast<double>(n), 8,
          std::max(1, max_iters));
      cap = std::min(cap, std::max(iter + 1, needed));
    }
  }
  if (best_count < 8)
    throw EstimationError("fundamental ransac: no hypothesis with >= 8 inliers");

  // Re-fit on the inlier set when that keeps at least 8 inliers.
  std::vector<Vec2> isrc, idst;
  for (std::size_t i = 0; i < n; ++i)
    if (best_mask[i]) {
      isrc.push_back(src[i]);
      idst.push_back(dst[i]);
    }
  try {
    FundamentalMatrix refined = fit_fundamental_8point(isrc, idst);
    std::vector<bool> mask;
    int count = score(refined, mask);
    if (count >= 8) {
      best_f = refined;
      best_mask = std::move(mask);
      best_count = count;
    }
  } catch (const EstimationError&) {
  }
  return {best_f, std::move(best_mask), best_count};
}

}  // namespace restyle
