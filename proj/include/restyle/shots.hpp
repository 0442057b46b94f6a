/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "restyle/features.hpp"
#include "restyle/histogram.hpp"
#include "restyle/image.hpp"
#include "restyle/ransac.hpp"

// Shot segmentation on color-histogram distances (hard cuts plus
// luma-extremum fades) and scene grouping by geometrically verified
// keypoint matches between representative frames.

namespace restyle {

enum class Transition { hard_cut, fade };

inline const char* to_string(Transition t) {
  return t == Transition::fade ? "fade" : "hard_cut";
}

/// Contiguous frame interval [start, end); shots tile their sequence.
struct Shot {
  int start = 0;
  int end = 0;
  Transition transition_in = Transition::hard_cut;
  int scene_id = -1;

  int length() const { return end - start; }
};

struct ShotDetectParams {
  double cut_threshold = 0.5;
  int fade_window = 12;
  double fade_threshold = 0.4;
  int min_shot_len = 8;
  int scene_match_threshold = 15;
};

inline void validate(const ShotDetectParams& p) {
  if (!(p.fade_threshold > 0.0) || !(p.fade_threshold <= p.cut_threshold) ||
      !(p.cut_threshold <= 1.0))
    throw ConfigError(
        "shot params: need 0 < fade_threshold <= cut_threshold <= 1");
  if (p.min_shot_len < 1)
    throw ConfigError("shot params: min_shot_len must be >= 1");
  if (p.fade_window < 2)
    throw ConfigError("shot params: fade_window must be >= 2");
}

/// Feature/geometry knobs used when linking shots into scenes.
struct SceneMatchParams {
  int fast_threshold = 20;
  int max_keypoints = 500;
  double match_ratio = 0.8;
  double inlier_px = 3.0;
  int max_iters = 500;
  std::uint64_t seed = 0;
};

namespace detail {

// Midpoint of the plateau of window values attaining the extreme; `minimize`
// picks the luma dip, otherwise the flash peak.
inline int extremum_frame(const std::vector<double>& lum, int lo, int hi,
                          bool minimize) {
  int best = lo;
  for (int i = lo; i <= hi; ++i) {
    bool better = minimize ? lum[static_cast<std::size_t>(i)] <
                                 lum[static_cast<std::size_t>(best)]
                           : lum[static_cast<std::size_t>(i)] >
                                 lum[static_cast<std::size_t>(best)];
    if (better) best = i;
  }
  int first = best, last = best;
  while (first > lo && lum[static_cast<std::size_t>(first - 1)] ==
                           lum[static_cast<std::size_t>(best)])
    --first;
  while (last < hi && lum[static_cast<std::size_t>(last + 1)] ==
                          lum[static_cast<std::size_t>(best)])
    ++last;
  return (first + last) / 2;
}

}  // namespace detail

/// Segment a sequence into shots. Hard cuts fire on single-step histogram
/// distance; fades fire when the windowed distance rises while every
/// single step stays below the cut threshold and the mean luma passes
/// through an extremum, which anchors the boundary.
inline std::vector<Shot> detect_shots(const FrameSequence& seq,
                                      const ShotDetectParams& params) {
  validate(params);
  const int n = static_cast<int>(seq.frames.size());
  if (n == 0) throw Error("detect_shots: empty sequence");

  std::vector<Histogram> hist(static_cast<std::size_t>(n));
  std::vector<double> lum(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    hist[static_cast<std::size_t>(t)] =
        color_histogram(seq.frames[static_cast<std::size_t>(t)]);
    lum[static_cast<std::size_t>(t)] =
        mean_luma(seq.frames[static_cast<std::size_t>(t)]);
  }
  std::vector<double> step(static_cast<std::size_t>(n), 0.0);
  for (int t = 1; t < n; ++t)
    step[static_cast<std::size_t>(t)] =
        hist_distance(hist[static_cast<std::size_t>(t - 1)],
                      hist[static_cast<std::size_t>(t)]);

  // Candidate boundaries; hard cuts take precedence on the same frame.
  std::map<int, Transition> candidates;
  for (int t = 1; t < n; ++t)
    if (step[static_cast<std::size_t>(t)] > params.cut_threshold)
      candidates.emplace(t, Transition::hard_cut);

  const int w = params.fade_window;
  constexpr double kPassMargin = 1.0;   // luma levels
  constexpr double kFadeAnchor = 24.0;  // how close to black/white a fade gets
  for (int t = w; t < n; ++t) {
    if (hist_distance(hist[static_cast<std::size_t>(t - w)],
                      hist[static_cast<std::size_t>(t)]) <=
        params.fade_threshold)
      continue;
    if (t - w + 1 > t - 1) continue;
    int dip = detail::extremum_frame(lum, t - w + 1, t - 1, true);
    int flash = detail::extremum_frame(lum, t - w + 1, t - 1, false);
    double ends_min = std::min(lum[static_cast<std::size_t>(t - w)],
                               lum[static_cast<std::size_t>(t)]);
    double ends_max = std::max(lum[static_cast<std::size_t>(t - w)],
                               lum[static_cast<std::size_t>(t)]);
    double dip_depth = ends_min - lum[static_cast<std::size_t>(dip)];
    double flash_height = lum[static_cast<std::size_t>(flash)] - ends_max;
    bool dip_ok = dip_depth > kPassMargin &&
                  lum[static_cast<std::size_t>(dip)] <= kFadeAnchor;
    bool flash_ok = flash_height > kPassMargin &&
                    lum[static_cast<std::size_t>(flash)] >= 255.0 - kFadeAnchor;
    int e = -1;
    if (dip_ok && (!flash_ok || dip_depth >= flash_height))
      e = dip;
    else if (flash_ok)
      e = flash;
    if (e <= 0) continue;
    // The ramp up to the extremum must be gradual; whatever closes the
    // fade afterwards (possibly a hard cut) is allowed.
    bool quiet = true;
    for (int k = t - w + 1; k <= e && quiet; ++k)
      if (step[static_cast<std::size_t>(k)] > params.cut_threshold)
        quiet = false;
    if (quiet) candidates.emplace(e, Transition::fade);
  }

  // Greedy left-to-right suppression of boundaries that would create a
  // shot shorter than min_shot_len.
  std::vector<std::pair<int, Transition>> boundaries;
  int prev = 0;
  for (const auto& [b, type] : candidates) {
    if (b - prev < params.min_shot_len) continue;
    boundaries.emplace_back(b, type);
    prev = b;
  }

  std::vector<Shot> shots;
  int start = 0;
  Transition trans = Transition::hard_cut;
  for (const auto& [b, type] : boundaries) {
    shots.push_back({start, b, trans, -1});
    start = b;
    trans = type;
  }
  shots.push_back({start, n, trans, -1});
  return shots;
}

/// Assign scene ids: shots link when any pair of representative frames
/// (first/middle/last) yields enough matches that survive a fundamental-
/// matrix RANSAC; scenes are the connected components of that relation.
inline std::vector<Shot> group_scenes(const FrameSequence& seq,
                                      std::vector<Shot> shots,
                                      const ShotDetectParams& params,
                                      const SceneMatchParams& match_params = {}) {
  const std::size_t ns = shots.size();
  if (ns == 0) return shots;
  for (std::size_t i = 0; i < ns; ++i)
    if (shots[i].start >= shots[i].end ||
        (i > 0 && shots[i].start != shots[i - 1].end))
      throw Error("group_scenes: shots do not tile the sequence");
  if (shots.back().end != static_cast<int>(seq.frames.size()))
    throw Error("group_scenes: shots do not cover the sequence");

  struct RepFeatures {
    std::vector<Vec2> points;  // aligned with descriptors
    std::vector<Descriptor> descriptors;
  };
  std::vector<std::vector<RepFeatures>> reps(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    std::set<int> idx{shots[i].start, shots[i].start + (shots[i].length() - 1) / 2,
                      shots[i].end - 1};
    for (int fi : idx) {
      const Frame& frame = seq.frames[static_cast<std::size_t>(fi)];
      if (frame.width < 7 || frame.height < 7) continue;
      GrayImage g = luma(frame);
      std::vector<Keypoint> kps = fast_detect(g, match_params.fast_threshold,
                                              match_params.max_keypoints);
      DescriptorSet ds = describe(g, kps);
      RepFeatures rf;
      rf.descriptors = std::move(ds.descriptors);
      rf.points.reserve(ds.kept.size());
      for (std::size_t k : ds.kept)
        rf.points.emplace_back(kps[k].x, kps[k].y);
      reps[i].push_back(std::move(rf));
    }
  }

  auto linked = [&](std::size_t a, std::size_t b) -> bool {
    for (const RepFeatures& ra : reps[a]) {
      for (const RepFeatures& rb : reps[b]) {
        MatchSet m = match(ra.descriptors, rb.descriptors,
                           match_params.match_ratio);
        if (m.pairs.size() < 8 ||
            static_cast<int>(m.pairs.size()) < params.scene_match_threshold)
          continue;
        std::vector<Vec2> src, dst;
        src.reserve(m.pairs.size());
        dst.reserve(m.pairs.size());
        for (const auto& p : m.pairs) {
          src.push_back(ra.points[p.a]);
          dst.push_back(rb.points[p.b]);
        }
        try {
          FundamentalEstimate est = estimate_fundamental_ransac(
              src, dst, match_params.inlier_px, match_params.max_iters,
              match_params.seed);
          if (est.inlier_count >= params.scene_match_threshold) return true;
        } catch (const EstimationError&) {
        }
      }
    }
    return false;
  };

  // Union-find over shots.
  std::vector<std::size_t> parent(ns);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = i + 1; j < ns; ++j) {
      if (find(i) == find(j)) continue;
      if (linked(i, j)) parent[find(j)] = find(i);
    }

  std::map<std::size_t, int> scene_of_root;
  int next_scene = 0;
  for (std::size_t i = 0; i < ns; ++i) {
    std::size_t root = find(i);
    auto it = scene_of_root.find(root);
    if (it == scene_of_root.end())
      it = scene_of_root.emplace(root, next_scene++).first;
    shots[i].scene_id = it->second;
  }
  return shots;
}

}  // namespace restyle
