/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "restyle/geometry.hpp"
#include "restyle/motion.hpp"
#include "restyle/retrieval.hpp"
#include "restyle/shots.hpp"
#include "restyle/style.hpp"
#include "restyle/transfer.hpp"

// JSON (de)serialization for every on-disk pipeline artifact: shot lists,
// style records, the repository index, edit plans, timelines, annotation
// sidecars, and user speed maps. Field names are part of the stable
// interface.

namespace restyle {

using json = nlohmann::json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("invalid JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw Error("short write to " + path.string());
}

// --- primitives ----------------------------------------------------------

inline json homography_to_json(const Homography& h) {
  const Mat3& m = h.matrix();
  return json::array({m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1), m(1, 2),
                      m(2, 0), m(2, 1), m(2, 2)});
}

inline Homography homography_from_json(const json& j) {
  if (!j.is_array() || j.size() != 9)
    throw Error("homography: expected a 9-element array");
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = j[static_cast<std::size_t>(i)];
  return Homography::from_matrix(m);
}

inline Transition transition_from_string(const std::string& s) {
  if (s == "hard_cut") return Transition::hard_cut;
  if (s == "fade") return Transition::fade;
  throw Error("unknown transition '" + s + "'");
}

inline ContentCategory category_from_string(const std::string& s) {
  if (s == "background") return ContentCategory::background;
  if (s == "single_focus") return ContentCategory::single_focus;
  if (s == "multi_subject") return ContentCategory::multi_subject;
  throw Error("unknown content category '" + s + "'");
}

// --- shots ----------------------------------------------------------------

inline json shots_to_json(const std::vector<Shot>& shots) {
  json out = json::array();
  for (const Shot& s : shots)
    out.push_back({{"start", s.start},
                   {"end", s.end},
                   {"transition_in", to_string(s.transition_in)},
                   {"scene_id", s.scene_id}});
  return out;
}

inline std::vector<Shot> shots_from_json(const json& j) {
  std::vector<Shot> out;
  for (const json& e : j) {
    Shot s;
    s.start = e.at("start").get<int>();
    s.end = e.at("end").get<int>();
    s.transition_in =
        transition_from_string(e.at("transition_in").get<std::string>());
    s.scene_id = e.at("scene_id").get<int>();
    out.push_back(s);
  }
  return out;
}

// --- tracks and styles ------------------------------------------------------

inline json track_to_json(const HomographyTrack& t) {
  json steps = json::array();
  json cumulative = json::array();
  for (const Homography& h : t.steps) steps.push_back(homography_to_json(h));
  for (const Homography& h : t.cumulative)
    cumulative.push_back(homography_to_json(h));
  json fallback = json::array();
  for (bool b : t.fallback) fallback.push_back(b);
  return {{"start_index", t.start_index},
          {"steps", steps},
          {"cumulative", cumulative},
          {"fallback", fallback},
          {"attempted", t.attempted},
          {"degraded", t.degraded()}};
}

inline HomographyTrack track_from_json(const json& j) {
  HomographyTrack t;
  t.start_index = j.at("start_index").get<int>();
  t.attempted = j.value("attempted", 0);
  for (const json& e : j.at("steps")) t.steps.push_back(homography_from_json(e));
  for (const json& e : j.at("cumulative"))
    t.cumulative.push_back(homography_from_json(e));
  for (const json& e : j.at("fallback")) t.fallback.push_back(e.get<bool>());
  if (t.steps.size() != t.cumulative.size() ||
      t.steps.size() != t.fallback.size())
    throw Error("track: inconsistent array lengths");
  return t;
}

inline json label_to_json(const ContentLabel& l) {
  json counts = json::object();
  for (const auto& [k, v] : l.object_counts) counts[k] = v;
  return {{"category", to_string(l.category)}, {"object_counts", counts}};
}

inline ContentLabel label_from_json(const json& j) {
  ContentLabel l;
  l.category = category_from_string(j.at("category").get<std::string>());
  for (const auto& [k, v] : j.at("object_counts").items())
    l.object_counts[k] = v.get<double>();
  return l;
}

inline json style_to_json(const ShotStyle& s, int shot_index) {
  return {{"shot_index", shot_index},
          {"start", s.shot.start},
          {"end", s.shot.end},
          {"transition_in", to_string(s.transition_in)},
          {"scene_id", s.shot.scene_id},
          {"label", label_to_json(s.label)},
          {"speed", s.speed},
          {"aspect", s.aspect},
          {"frame_width", s.frame_width},
          {"frame_height", s.frame_height},
          {"brightness", s.brightness},
          {"track", track_to_json(s.track)}};
}

inline ShotStyle style_from_json(const json& j) {
  ShotStyle s;
  s.shot.start = j.at("start").get<int>();
  s.shot.end = j.at("end").get<int>();
  s.shot.transition_in =
      transition_from_string(j.at("transition_in").get<std::string>());
  s.shot.scene_id = j.at("scene_id").get<int>();
  s.transition_in = s.shot.transition_in;
  s.label = label_from_json(j.at("label"));
  s.speed = j.at("speed").get<double>();
  s.aspect = j.at("aspect").get<double>();
  s.frame_width = j.at("frame_width").get<int>();
  s.frame_height = j.at("frame_height").get<int>();
  s.brightness = j.at("brightness").get<std::vector<double>>();
  s.track = track_from_json(j.at("track"));
  return s;
}

inline json styles_to_json(const std::vector<ShotStyle>& styles) {
  json out = json::array();
  for (std::size_t i = 0; i < styles.size(); ++i)
    out.push_back(style_to_json(styles[i], static_cast<int>(i)));
  return out;
}

inline std::vector<ShotStyle> styles_from_json(const json& j) {
  std::vector<ShotStyle> out;
  for (const json& e : j) out.push_back(style_from_json(e));
  return out;
}

// --- repository index -------------------------------------------------------

inline json index_to_json(const RepoIndex& index) {
  json out = json::array();
  for (const RepoClip& c : index.clips)
    out.push_back({{"source_id", c.source_id},
                   {"duration", c.duration},
                   {"fps_num", c.frame_rate.num},
                   {"fps_den", c.frame_rate.den},
                   {"width", c.width},
                   {"height", c.height},
                   {"aspect", c.aspect},
                   {"label", label_to_json(c.label)}});
  return out;
}

inline RepoIndex index_from_json(const json& j) {
  RepoIndex index;
  for (const json& e : j) {
    RepoClip c;
    c.source_id = e.at("source_id").get<std::string>();
    c.duration = e.at("duration").get<int>();
    c.frame_rate.num = e.at("fps_num").get<int>();
    c.frame_rate.den = e.at("fps_den").get<int>();
    c.width = e.at("width").get<int>();
    c.height = e.at("height").get<int>();
    c.aspect = e.at("aspect").get<double>();
    c.label = label_from_json(e.at("label"));
    index.clips.push_back(std::move(c));
  }
  return index;
}

// --- annotations and speed maps ---------------------------------------------

inline std::vector<ForegroundAnnotation> annotations_from_json(const json& j) {
  std::vector<ForegroundAnnotation> out;
  for (const json& e : j) {
    ForegroundAnnotation a;
    a.frame = e.at("frame").get<int>();
    for (const json& bj : e.value("boxes", json::array())) {
      Box b;
      b.x = bj.at("x").get<double>();
      b.y = bj.at("y").get<double>();
      b.w = bj.at("w").get<double>();
      b.h = bj.at("h").get<double>();
      b.label = bj.value("label", "object");
      a.boxes.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

inline json annotations_to_json(std::span<const ForegroundAnnotation> anns) {
  json out = json::array();
  for (const ForegroundAnnotation& a : anns) {
    json boxes = json::array();
    for (const Box& b : a.boxes)
      boxes.push_back({{"x", b.x},
                       {"y", b.y},
                       {"w", b.w},
                       {"h", b.h},
                       {"label", b.label}});
    out.push_back({{"frame", a.frame}, {"boxes", boxes}});
  }
  return out;
}

/// Speed map file: an object of {"<shot index>": factor}.
inline std::map<int, double> speed_map_from_json(const json& j) {
  std::map<int, double> out;
  for (const auto& [k, v] : j.items()) {
    int idx;
    try {
      idx = std::stoi(k);
    } catch (const std::exception&) {
      throw ConfigError("speed map: key '" + k + "' is not a shot index");
    }
    double factor = v.get<double>();
    if (!(factor > 0.0))
      throw ConfigError("speed map: nonpositive speed for shot " + k);
    out[idx] = factor;
  }
  return out;
}

// --- edit plan ---------------------------------------------------------------

struct EditPlanEntry {
  int shot_index = 0;
  int start = 0;
  int end = 0;
  std::string source_id;
  int start_offset = 0;
  FramingSolution framing;
  double speed = 1.0;
  std::string category;
  bool degraded_track = false;
};

struct EditPlan {
  std::string config_fingerprint;
  std::vector<EditPlanEntry> entries;
};

inline json plan_to_json(const EditPlan& plan) {
  json shots = json::array();
  for (const EditPlanEntry& e : plan.entries)
    shots.push_back({{"shot_index", e.shot_index},
                     {"start", e.start},
                     {"end", e.end},
                     {"source_id", e.source_id},
                     {"start_offset", e.start_offset},
                     {"framing",
                      {{"scale", e.framing.scale},
                       {"offset_x", e.framing.offset_x},
                       {"offset_y", e.framing.offset_y}}},
                     {"speed", e.speed},
                     {"category", e.category},
                     {"degraded_track", e.degraded_track}});
  return {{"config_fingerprint", plan.config_fingerprint}, {"shots", shots}};
}

inline EditPlan plan_from_json(const json& j) {
  EditPlan plan;
  plan.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  for (const json& e : j.at("shots")) {
    EditPlanEntry entry;
    entry.shot_index = e.at("shot_index").get<int>();
    entry.start = e.at("start").get<int>();
    entry.end = e.at("end").get<int>();
    entry.source_id = e.at("source_id").get<std::string>();
    entry.start_offset = e.at("start_offset").get<int>();
    entry.framing.scale = e.at("framing").at("scale").get<double>();
    entry.framing.offset_x = e.at("framing").at("offset_x").get<double>();
    entry.framing.offset_y = e.at("framing").at("offset_y").get<double>();
    entry.speed = e.at("speed").get<double>();
    entry.category = e.value("category", "background");
    entry.degraded_track = e.value("degraded_track", false);
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

}  // namespace restyle
