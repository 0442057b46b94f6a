/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "restyle/image.hpp"
#include "restyle/motion.hpp"
#include "restyle/shots.hpp"

// The per-shot style record: content category, brightness curve, playback
// speed, camera track, and timing.

namespace restyle {

enum class ContentCategory { background, single_focus, multi_subject };

inline const char* to_string(ContentCategory c) {
  switch (c) {
    case ContentCategory::single_focus:
      return "single_focus";
    case ContentCategory::multi_subject:
      return "multi_subject";
    default:
      return "background";
  }
}

struct ContentLabel {
  ContentCategory category = ContentCategory::background;
  std::map<std::string, double> object_counts;  // mean count per label
};

struct LabelParams {
  std::set<std::string> salient_labels{"face", "person"};
  double background_max = 0.5;   // mean salient count below this: background
  double single_focus_max = 2.0;  // up to this: single focus; above: multi
};

/// Categorize a scene from detector annotations of its sampled frames.
/// The mean salient-object count per sample decides the category.
inline ContentLabel label_scene(std::span<const ForegroundAnnotation> samples,
                                const LabelParams& params = {}) {
  if (samples.empty()) throw Error("label_scene: no sampled frames");
  ContentLabel out;
  for (const ForegroundAnnotation& a : samples)
    for (const Box& b : a.boxes) out.object_counts[b.label] += 1.0;
  for (auto& [label, count] : out.object_counts)
    count /= static_cast<double>(samples.size());
  double salient = 0.0;
  for (const std::string& l : params.salient_labels) {
    auto it = out.object_counts.find(l);
    if (it != out.object_counts.end()) salient += it->second;
  }
  if (salient < params.background_max)
    out.category = ContentCategory::background;
  else if (salient <= params.single_focus_max)
    out.category = ContentCategory::single_focus;
  else
    out.category = ContentCategory::multi_subject;
  return out;
}

/// Per-frame mean luma over a shot.
inline std::vector<double> brightness_curve(std::span<const Frame> frames) {
  std::vector<double> curve;
  curve.reserve(frames.size());
  for (const Frame& f : frames) curve.push_back(mean_luma(f));
  return curve;
}

/// Indices of up to `count` evenly spaced frames of [start, end).
inline std::vector<int> sample_frame_indices(int start, int end,
                                             int count = 5) {
  std::vector<int> out;
  int len = end - start;
  if (len <= 0) return out;
  int n = std::min(count, len);
  for (int k = 0; k < n; ++k) {
    int idx = n == 1 ? start
                     : start + static_cast<int>(std::lround(
                                   static_cast<double>(k) * (len - 1) /
                                   (n - 1)));
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

/// Everything extracted from one source shot.
struct ShotStyle {
  Shot shot;
  HomographyTrack track;
  ContentLabel label;
  double speed = 1.0;
  std::vector<double> brightness;  // one mean luma per shot frame
  Transition transition_in = Transition::hard_cut;
  double aspect = 1.0;
  int frame_width = 0;
  int frame_height = 0;

  int length() const { return shot.length(); }
};

/// Populate a ShotStyle; the playback speed comes from the user-labeled
/// map (defaults to 1.0 when the shot has no entry).
inline ShotStyle assemble_style(const Shot& shot, HomographyTrack track,
                                ContentLabel label,
                                std::vector<double> brightness,
                                const std::map<int, double>& speed_map,
                                int shot_index, int frame_width,
                                int frame_height) {
  if (static_cast<int>(brightness.size()) != shot.length())
    throw Error("assemble_style: brightness length != shot length");
  if (static_cast<int>(track.size()) != shot.length())
    throw Error("assemble_style: track length != shot length");
  double speed = 1.0;
  auto it = speed_map.find(shot_index);
  if (it != speed_map.end()) speed = it->second;
  if (!(speed > 0.0))
    throw ConfigError("speed map: nonpositive speed " +
                      std::to_string(speed) + " for shot " +
                      std::to_string(shot_index));
  ShotStyle s;
  s.shot = shot;
  s.track = std::move(track);
  s.label = std::move(label);
  s.speed = speed;
  s.brightness = std::move(brightness);
  s.transition_in = shot.transition_in;
  s.frame_width = frame_width;
  s.frame_height = frame_height;
  s.aspect = frame_height > 0
                 ? static_cast<double>(frame_width) / frame_height
                 : 0.0;
  return s;
}

}  // namespace restyle
