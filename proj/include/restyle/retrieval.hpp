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
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "restyle/image.hpp"
#include "restyle/motion.hpp"
#include "restyle/style.hpp"

// Raw-footage repository index and per-shot clip selection: hard aspect and
// duration constraints, a content-category filter that waives itself when
// empty, and cosine ranking over object counts with a reuse-fairness
// tie-break.

namespace restyle {

struct RepoClip {
  std::string source_id;
  int duration = 0;  // frames
  Fraction frame_rate{25, 1};
  int width = 0;
  int height = 0;
  double aspect = 1.0;
  ContentLabel label;
  int used = 0;  // assignments within the current plan

  const std::map<std::string, double>& object_counts() const {
    return label.object_counts;
  }
};

struct RepoIndex {
  std::vector<RepoClip> clips;
};

/// Non-owning view of one repository clip plus its detector sidecar.
struct RepoClipSource {
  const FrameSequence* seq = nullptr;
  std::span<const ForegroundAnnotation> annotations;
};

inline RepoIndex index_repository(std::span<const RepoClipSource> clips,
                                  const LabelParams& label_params = {}) {
  RepoIndex index;
  std::set<std::string> seen;
  for (const RepoClipSource& in : clips) {
    const FrameSequence& seq = *in.seq;
    if (seq.frames.empty())
      throw Error("index: clip '" + seq.source_id + "' has no frames");
    if (!seen.insert(seq.source_id).second)
      throw Error("index: duplicate source_id '" + seq.source_id + "'");
    RepoClip clip;
    clip.source_id = seq.source_id;
    clip.duration = static_cast<int>(seq.frames.size());
    clip.frame_rate = seq.frame_rate;
    clip.width = seq.width();
    clip.height = seq.height();
    clip.aspect = seq.aspect();

    std::vector<int> sampled =
        sample_frame_indices(0, clip.duration, 5);
    std::map<int, const ForegroundAnnotation*> by_frame;
    for (const ForegroundAnnotation& a : in.annotations) by_frame[a.frame] = &a;
    std::vector<ForegroundAnnotation> samples;
    for (int fi : sampled) {
      auto it = by_frame.find(fi);
      samples.push_back(it == by_frame.end() ? ForegroundAnnotation{fi, {}}
                                             : *it->second);
    }
    clip.label = label_scene(samples, label_params);
    index.clips.push_back(std::move(clip));
  }
  return index;
}

struct RetrievalParams {
  double aspect_tolerance = 0.01;  // relative
};

struct Selection {
  std::string source_id;
  int start_offset = 0;  // frames; clips are pre-trimmed, so always 0
  std::size_t clip_index = 0;
};

namespace detail {

inline double cosine_similarity(const std::map<std::string, double>& a,
                                const std::map<std::string, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) {
    na += v * v;
    auto it = b.find(k);
    if (it != b.end()) dot += v * it->second;
  }
  for (const auto& [k, v] : b) nb += v * v;
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Raw frames a shot consumes after playback-speed resampling.
inline int frames_needed(int shot_length, double speed) {
  return std::max(1, static_cast<int>(
                         std::ceil(shot_length * speed - 1e-9)));
}

}  // namespace detail

/// Select the target clip for one shot style and increment its use count.
/// Hard constraints: aspect within tolerance and enough raw frames for the
/// resampled duration. Soft: matching content category when any candidate
/// has it. Ranking: object-count cosine similarity, then lowest use count,
/// then source_id.
inline Selection select_footage(const ShotStyle& style, RepoIndex& index,
                                const RetrievalParams& params = {}) {
  if (index.clips.empty()) throw Error("retrieval: repository index is empty");
  const int needed = detail::frames_needed(style.length(), style.speed);

  auto aspect_ok = [&](const RepoClip& c) {
    return std::abs(c.aspect - style.aspect) <=
           params.aspect_tolerance * style.aspect;
  };
  auto duration_ok = [&](const RepoClip& c) { return c.duration >= needed; };

  std::vector<std::size_t> hard_pass;
  for (std::size_t i = 0; i < index.clips.size(); ++i)
    if (aspect_ok(index.clips[i]) && duration_ok(index.clips[i]))
      hard_pass.push_back(i);

  if (hard_pass.empty()) {
    // Report the nearest miss: clips failing only the duration constraint
    // rank closer than clips failing aspect.
    std::size_t best = 0;
    double best_key = 1e300;
    bool best_is_aspect = true;
    for (std::size_t i = 0; i < index.clips.size(); ++i) {
      const RepoClip& c = index.clips[i];
      bool fails_aspect = !aspect_ok(c);
      double key = fails_aspect
                       ? 1e6 + std::abs(c.aspect - style.aspect)
                       : static_cast<double>(needed - c.duration);
      if (key < best_key) {
        best_key = key;
        best = i;
        best_is_aspect = fails_aspect;
      }
    }
    const RepoClip& c = index.clips[best];
    std::string msg =
        best_is_aspect
            ? "aspect constraint (clip " + c.source_id + " has " +
                  std::to_string(c.aspect) + ", shot needs " +
                  std::to_string(style.aspect) + " within " +
                  std::to_string(params.aspect_tolerance * 100.0) + "%)"
            : "duration constraint (clip " + c.source_id + " has " +
                  std::to_string(c.duration) + " frames, shot needs " +
                  std::to_string(needed) + " after speed resampling)";
    throw Error("retrieval: no clip satisfies hard constraints; nearest miss "
                "fails " +
                msg);
  }

  bool any_same_category = std::any_of(
      hard_pass.begin(), hard_pass.end(), [&](std::size_t i) {
        return index.clips[i].label.category == style.label.category;
      });
  std::vector<std::size_t> candidates;
  for (std::size_t i : hard_pass)
    if (!any_same_category ||
        index.clips[i].label.category == style.label.category)
      candidates.push_back(i);

  std::size_t best = candidates.front();
  double best_cos = -1.0;
  for (std::size_t i : candidates) {
    double cos = detail::cosine_similarity(style.label.object_counts,
                                           index.clips[i].object_counts());
    const RepoClip& c = index.clips[i];
    const RepoClip& b = index.clips[best];
    bool better;
    if (cos != best_cos) {
      better = cos > best_cos;
    } else if (c.used != b.used) {
      better = c.used < b.used;
    } else {
      better = c.source_id < b.source_id;
    }
    if (best_cos < 0.0 || better) {
      best = i;
      best_cos = cos;
    }
  }
  index.clips[best].used += 1;
  return {index.clips[best].source_id, 0, best};
}

}  // namespace restyle
