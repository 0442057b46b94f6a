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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "restyle/features.hpp"
#include "restyle/geometry.hpp"
#include "restyle/image.hpp"
#include "restyle/ransac.hpp"

// Per-shot camera motion: frame-to-frame homographies accumulated into a
// track that maps every frame into shot-start coordinates, with keypoints
// inside annotated foreground boxes excluded from estimation.

namespace restyle {

struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  std::string label;

  bool contains(double px, double py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
};

/// Detector sidecar content for one frame of a clip.
struct ForegroundAnnotation {
  int frame = 0;
  std::vector<Box> boxes;
};

struct TrackParams {
  int fast_threshold = 20;
  int max_keypoints = 800;
  double match_ratio = 0.8;
  double inlier_px = 2.0;
  int max_iters = 1000;
  std::uint64_t seed = 0;
  int stride = 1;  // >1 estimates only at stride anchors, holding in between
};

/// Camera motion of one shot.
///
/// steps[t] maps frame t-1 coordinates into frame t coordinates
/// (steps[0] is the identity); cumulative[t] maps frame t coordinates
/// into shot-start coordinates, so cumulative[t] =
/// cumulative[t-1] * steps[t]^-1.
struct HomographyTrack {
  std::vector<Homography> steps;
  std::vector<Homography> cumulative;
  std::vector<bool> fallback;  // true where estimation fell back to identity
  int start_index = 0;
  int attempted = 0;  // estimation attempts (anchors); 0 for built tracks

  std::size_t size() const { return steps.size(); }

  int fallback_count() const {
    return static_cast<int>(std::count(fallback.begin(), fallback.end(), true));
  }

  /// More than half of the attempted steps fell back to identity.
  bool degraded() const {
    return attempted > 0 && fallback_count() * 2 > attempted;
  }
};

/// Prefix composition of frame-to-frame steps into start-frame coordinates.
inline std::vector<Homography> accumulate(std::span<const Homography> steps) {
  if (steps.empty()) return {};
  if (!steps.front().is_identity(1e-9))
    throw Error("accumulate: steps[0] must be the identity");
  std::vector<Homography> cumulative;
  cumulative.reserve(steps.size());
  cumulative.push_back(Homography::identity());
  for (std::size_t t = 1; t < steps.size(); ++t)
    cumulative.push_back(cumulative.back() * steps[t].inverse());
  return cumulative;
}

namespace detail {

struct FrameFeatures {
  std::vector<Vec2> points;
  std::vector<Descriptor> descriptors;
};

inline FrameFeatures extract_background_features(
    const Frame& frame, std::span<const Box> boxes, const TrackParams& p) {
  FrameFeatures out;
  if (frame.width < 7 || frame.height < 7) return out;
  GrayImage g = luma(frame);
  std::vector<Keypoint> kps = fast_detect(g, p.fast_threshold,
                                          p.max_keypoints);
  mark_foreground(kps, boxes);
  std::erase_if(kps, [](const Keypoint& k) { return k.is_foreground; });
  DescriptorSet ds = describe(g, kps);
  out.descriptors = std::move(ds.descriptors);
  out.points.reserve(ds.kept.size());
  for (std::size_t k : ds.kept) out.points.emplace_back(kps[k].x, kps[k].y);
  return out;
}

}  // namespace detail

/// Track camera motion across the frames of one shot. Estimation failures
/// degrade to identity steps with a per-frame flag instead of aborting.
/// Annotation frame indices are global; start_index anchors the lookup.
inline HomographyTrack track_camera(std::span<const Frame> frames,
                                    std::span<const ForegroundAnnotation> fg,
                                    const TrackParams& params,
                                    int start_index = 0) {
  const std::size_t n = frames.size();
  if (n == 0) throw Error("track_camera: empty shot");
  const int stride = std::max(1, params.stride);

  std::map<int, const ForegroundAnnotation*> ann;
  for (const ForegroundAnnotation& a : fg) ann[a.frame] = &a;
  auto boxes_at = [&](std::size_t local) -> std::span<const Box> {
    auto it = ann.find(start_index + static_cast<int>(local));
    if (it == ann.end()) return {};
    return it->second->boxes;
  };

  HomographyTrack track;
  track.start_index = start_index;
  track.steps.assign(n, Homography::identity());
  track.fallback.assign(n, false);

  detail::FrameFeatures prev;
  bool have_prev = false;
  std::size_t prev_index = 0;
  for (std::size_t t = 1; t < n; ++t) {
    if (static_cast<int>(t) % stride != 0) continue;
    ++track.attempted;
    if (!have_prev || prev_index != t - static_cast<std::size_t>(stride)) {
      std::size_t base = t - static_cast<std::size_t>(stride);
      prev = detail::extract_background_features(frames[base], boxes_at(base),
                                                 params);
    }
    detail::FrameFeatures cur = detail::extract_background_features(
        frames[t], boxes_at(t), params);
    bool ok = false;
    if (prev.points.size() >= 4 && cur.points.size() >= 4) {
      MatchSet m = match(prev.descriptors, cur.descriptors,
                         params.match_ratio);
      if (m.pairs.size() >= 4) {
        std::vector<Vec2> src, dst;
        src.reserve(m.pairs.size());
        dst.reserve(m.pairs.size());
        for (const auto& pr : m.pairs) {
          src.push_back(prev.points[pr.a]);
          dst.push_back(cur.points[pr.b]);
        }
        try {
          HomographyEstimate est = estimate_homography_ransac(
              src, dst, params.inlier_px, params.max_iters,
              params.seed + static_cast<std::uint64_t>(t));
          track.steps[t] = est.h;
          ok = true;
        } catch (const EstimationError&) {
        }
      }
    }
    if (!ok) track.fallback[t] = true;
    prev = std::move(cur);
    have_prev = true;
    prev_index = t;
  }
  track.cumulative = accumulate(track.steps);
  return track;
}

/// Axis-aligned union, in start-frame coordinates, of every frame's
/// corners mapped through its cumulative homography.
inline Rect mosaic_bounds(const HomographyTrack& track, int width,
                          int height) {
  if (track.cumulative.empty()) throw Error("mosaic_bounds: empty track");
  Rect r{1e300, 1e300, -1e300, -1e300};
  const Vec2 corners[4] = {{0.0, 0.0},
                           {static_cast<double>(width), 0.0},
                           {static_cast<double>(width),
                            static_cast<double>(height)},
                           {0.0, static_cast<double>(height)}};
  for (const Homography& h : track.cumulative)
    for (const Vec2& c : corners) {
      Vec2 p = h.apply(c);
      r.x0 = std::min(r.x0, p.x());
      r.y0 = std::min(r.y0, p.y());
      r.x1 = std::max(r.x1, p.x());
      r.y1 = std::max(r.y1, p.y());
    }
  return r;
}

/// Composite all shot frames into start-frame coordinates. First write
/// wins, so the earliest frame stays on top.
inline Frame render_mosaic(std::span<const Frame> frames,
                           const HomographyTrack& track,
                           std::int64_t max_area = 16'000'000) {
  if (frames.empty()) throw Error("render_mosaic: no frames");
  if (frames.size() != track.size())
    throw Error("render_mosaic: track length does not match frame count");
  const int fw = frames.front().width;
  const int fh = frames.front().height;
  Rect bounds = mosaic_bounds(track, fw, fh);
  const double off_x = std::floor(bounds.x0);
  const double off_y = std::floor(bounds.y0);
  const std::int64_t cw =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                    std::ceil(bounds.x1) - off_x));
  const std::int64_t ch =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                    std::ceil(bounds.y1) - off_y));
  if (cw * ch > max_area)
    throw Error("render_mosaic: canvas " + std::to_string(cw) + "x" +
                std::to_string(ch) + " exceeds max area " +
                std::to_string(max_area));

  Frame canvas = make_frame(static_cast<int>(cw), static_cast<int>(ch));
  std::vector<bool> occupied(static_cast<std::size_t>(cw * ch), false);

  const Vec2 corners[4] = {{0.0, 0.0},
                           {static_cast<double>(fw), 0.0},
                           {static_cast<double>(fw), static_cast<double>(fh)},
                           {0.0, static_cast<double>(fh)}};
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const Homography& fwd = track.cumulative[t];
    Homography inv = fwd.inverse();
    // Restrict the scan to this frame's projected bounding box.
    double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
    for (const Vec2& c : corners) {
      Vec2 p = fwd.apply(c);
      bx0 = std::min(bx0, p.x());
      by0 = std::min(by0, p.y());
      bx1 = std::max(bx1, p.x());
      by1 = std::max(by1, p.y());
    }
    int cx0 = std::max(0, static_cast<int>(std::floor(bx0 - off_x)));
    int cy0 = std::max(0, static_cast<int>(std::floor(by0 - off_y)));
    int cx1 = std::min(static_cast<int>(cw) - 1,
                       static_cast<int>(std::ceil(bx1 - off_x)));
    int cy1 = std::min(static_cast<int>(ch) - 1,
                       static_cast<int>(std::ceil(by1 - off_y)));
    for (int cy = cy0; cy <= cy1; ++cy) {
      for (int cx = cx0; cx <= cx1; ++cx) {
        std::size_t idx = static_cast<std::size_t>(cy) *
                              static_cast<std::size_t>(cw) +
                          static_cast<std::size_t>(cx);
        if (occupied[idx]) continue;
        Vec2 p = inv.apply(Vec2(cx + off_x, cy + off_y));
        std::uint8_t rgb[3];
        if (!sample_bilinear(frames[t], p.x(), p.y(), rgb)) continue;
        std::uint8_t* dst = canvas.px(cx, cy);
        dst[0] = rgb[0];
        dst[1] = rgb[1];
        dst[2] = rgb[2];
        occupied[idx] = true;
      }
    }
  }
  return canvas;
}

}  // namespace restyle
