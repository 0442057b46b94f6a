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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "restyle/geometry.hpp"
#include "restyle/image.hpp"
#include "restyle/motion.hpp"
#include "restyle/style.hpp"

// Applying a shot style to selected target footage: stabilization,
// framing solve, warp composition, playback-speed resampling, and
// brightness transfer.

namespace restyle {

/// Placement of the reference motion inside the target frame: a pure
/// scale plus offset, the start reprojection of the transferred motion.
struct FramingSolution {
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  Homography h_start() const {
    return Homography::scale_offset(scale, offset_x, offset_y);
  }
};

/// Per-frame inverses of the target's cumulative track; composing one of
/// these after the framing cancels the target's own camera motion.
inline std::vector<Homography> stabilize_track(const HomographyTrack& target) {
  std::vector<Homography> out;
  out.reserve(target.cumulative.size());
  for (const Homography& h : target.cumulative) out.push_back(h.inverse());
  return out;
}

inline constexpr double kMinFramingScale = 0.05;

/// Solve the start placement: the maximal scale at which the swept motion
/// bounds fit inside the target, then an offset that centers the sweep
/// (or aligns the start-frame center with the content box for single
/// focus shots, clamped back into bounds).
inline FramingSolution solve_framing(
    const ShotStyle& style, int target_w, int target_h,
    const std::optional<Rect>& target_content = {}) {
  if (target_w <= 0 || target_h <= 0)
    throw Error("framing: nonpositive target size");
  Rect b = mosaic_bounds(style.track, style.frame_width, style.frame_height);
  const double bw = b.width();
  const double bh = b.height();
  if (!(bw > 0.0) || !(bh > 0.0))
    throw EstimationError("framing: degenerate motion bounds");

  auto fits = [&](double s) {
    return s * bw <= static_cast<double>(target_w) &&
           s * bh <= static_cast<double>(target_h);
  };
  double lo = 0.0, hi = 1.0;
  if (fits(1.0)) {
    lo = 1.0;
    for (int i = 0; i < 64 && fits(hi); ++i) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int i = 0; i < 20 && hi - lo > 1e-4; ++i) {
    double mid = 0.5 * (lo + hi);
    if (fits(mid))
      lo = mid;
    else
      hi = mid;
  }
  const double scale = lo;
  if (scale < kMinFramingScale)
    throw EstimationError(
        "framing: target " + std::to_string(target_w) + "x" +
        std::to_string(target_h) + " too small for the camera motion " +
        "(max scale " + std::to_string(scale) + ")");

  // Offset limits that keep scale*B inside the target rectangle.
  const double ox_min = -scale * b.x0;
  const double ox_max = static_cast<double>(target_w) - scale * b.x1;
  const double oy_min = -scale * b.y0;
  const double oy_max = static_cast<double>(target_h) - scale * b.y1;

  double ox, oy;
  if (style.label.category == ContentCategory::single_focus &&
      target_content.has_value()) {
    ox = target_content->center_x() - scale * 0.5 * style.frame_width;
    oy = target_content->center_y() - scale * 0.5 * style.frame_height;
  } else {
    ox = 0.5 * (static_cast<double>(target_w) - scale * (b.x0 + b.x1));
    oy = 0.5 * (static_cast<double>(target_h) - scale * (b.y0 + b.y1));
  }
  ox = std::clamp(ox, std::min(ox_min, ox_max), std::max(ox_min, ox_max));
  oy = std::clamp(oy, std::min(oy_min, oy_max), std::max(oy_min, oy_max));
  return {scale, ox, oy};
}

/// Raw target frame index feeding output frame t at playback speed s.
inline int resample_index(double speed, int t, int target_len) {
  long idx = std::lround(speed * t);
  if (idx < 0) idx = 0;
  if (idx > target_len - 1) idx = target_len - 1;
  return static_cast<int>(idx);
}

/// Full reprojection for output frame t, mapping output pixel coordinates
/// into raw target-frame pixel coordinates for inverse-mapped sampling:
/// stabilization at the resampled index, then the framing start placement,
/// then the reference cumulative motion.
inline Homography compose_warp(const ShotStyle& style,
                               std::span<const Homography> stab,
                               const FramingSolution& framing, int t) {
  if (t < 0 || t >= style.length())
    throw Error("compose_warp: frame index " + std::to_string(t) +
                " outside shot of length " + std::to_string(style.length()));
  if (stab.empty()) throw Error("compose_warp: empty stabilization list");
  const int tp = resample_index(style.speed, t, static_cast<int>(stab.size()));
  const std::size_t ci =
      std::min(static_cast<std::size_t>(tp), style.track.cumulative.size() - 1);
  return stab[static_cast<std::size_t>(tp)] * framing.h_start() *
         style.track.cumulative[ci];
}

/// Inverse-mapped warp: each output pixel maps through w to a source
/// location sampled bilinearly; out-of-bounds samples are black.
inline Frame warp_frame(const Frame& src, const Homography& w, int out_w,
                        int out_h) {
  Frame out = make_frame(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      Vec2 p = w.apply(Vec2(x, y));
      std::uint8_t rgb[3];
      if (sample_bilinear(src, p.x(), p.y(), rgb)) {
        std::uint8_t* dst = out.px(x, y);
        dst[0] = rgb[0];
        dst[1] = rgb[1];
        dst[2] = rgb[2];
      }
    }
  }
  return out;
}

/// Scale the frame by target_mean / current mean luma, clamped per
/// channel. Darkening lands within rounding of the target; brightening
/// may clip.
inline Frame apply_brightness(const Frame& frame, double target_mean) {
  if (target_mean < 0.0 || target_mean > 255.0)
    throw Error("apply_brightness: target mean outside [0, 255]");
  double current = mean_luma(frame);
  double gain = target_mean / std::max(current, 1.0);
  Frame out = frame;
  for (std::uint8_t& c : out.pixels) {
    long v = std::lround(c * gain);
    c = static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
  }
  return out;
}

/// One source shot re-rendered from target footage.
struct RenderedShot {
  std::vector<Frame> frames;
  int shot_index = -1;
  std::string target_id;
  FramingSolution framing;
  double speed = 1.0;
};

/// Render a full shot: per output frame, warp the resampled target frame
/// by the composed reprojection, then match the style brightness curve.
/// Output length equals the source shot length exactly.
inline RenderedShot render_shot(const ShotStyle& style,
                                const FrameSequence& target,
                                const HomographyTrack& target_track,
                                const FramingSolution& framing) {
  if (target.frames.empty()) throw Error("render_shot: empty target");
  if (target_track.cumulative.empty())
    throw Error("render_shot: empty target track");
  if (target_track.size() > target.frames.size())
    throw Error("render_shot: track longer than target footage");
  if (static_cast<int>(style.brightness.size()) != style.length())
    throw Error("render_shot: style brightness length != shot length");

  std::vector<Homography> stab = stabilize_track(target_track);
  RenderedShot out;
  out.target_id = target.source_id;
  out.framing = framing;
  out.speed = style.speed;
  out.frames.reserve(static_cast<std::size_t>(style.length()));
  for (int t = 0; t < style.length(); ++t) {
    Homography w = compose_warp(style, stab, framing, t);
    int tp = resample_index(style.speed, t, static_cast<int>(stab.size()));
    Frame f = warp_frame(target.frames[static_cast<std::size_t>(tp)], w,
                         style.frame_width, style.frame_height);
    f = apply_brightness(f, style.brightness[static_cast<std::size_t>(t)]);
    f.index = t;
    out.frames.push_back(std::move(f));
  }
  return out;
}

}  // namespace restyle
