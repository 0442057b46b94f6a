/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "restyle/png_io.hpp"
#include "restyle/retrieval.hpp"
#include "restyle/serial.hpp"
#include "restyle/shots.hpp"
#include "restyle/style.hpp"
#include "restyle/transfer.hpp"
#include "restyle/y4m.hpp"

// Pipeline orchestration: project configuration, the analyze / index /
// transfer / review stages, and their on-disk artifacts. Stages persist
// everything as JSON + PNG + Y4M so each one can be re-run and reviewed
// in isolation.

namespace restyle {

namespace fs = std::filesystem;

struct PipelineParams {
  ShotDetectParams shot;
  SceneMatchParams scene;
  TrackParams track;
  LabelParams label;
  RetrievalParams retrieval;
  std::int64_t max_mosaic_area = 16'000'000;
};

struct ProjectConfig {
  fs::path source;
  fs::path repo_dir;
  fs::path annotations_dir;  // optional (empty when absent)
  fs::path speed_map;        // optional (empty when absent)
  fs::path output_dir;
  std::uint64_t seed = 0;
  PipelineParams params;
  std::map<int, double> speeds;

  static ProjectConfig load(const fs::path& config_path);
  void apply_override(const std::string& key, const std::string& value);
  void validate_paths() const;
  json to_json() const;
  std::string fingerprint() const;
};

inline ProjectConfig ProjectConfig::load(const fs::path& config_path) {
  if (!fs::exists(config_path))
    throw ConfigError("config file not found: " + config_path.string());
  json j;
  try {
    j = read_json_file(config_path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  ProjectConfig cfg;
  fs::path base = config_path.parent_path();
  auto resolve = [&](const std::string& key, bool required) -> fs::path {
    if (!j.contains(key)) {
      if (required)
        throw ConfigError("config: missing required field '" + key + "'");
      return {};
    }
    fs::path p = j.at(key).get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  cfg.source = resolve("source", true);
  cfg.repo_dir = resolve("repo_dir", true);
  cfg.output_dir = resolve("output_dir", true);
  cfg.annotations_dir = resolve("annotations_dir", false);
  cfg.speed_map = resolve("speed_map", false);
  cfg.seed = j.value("seed", std::uint64_t{0});

  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) {
      if (k == "salient_labels") {
        cfg.params.label.salient_labels.clear();
        for (const json& l : v)
          cfg.params.label.salient_labels.insert(l.get<std::string>());
      } else {
        cfg.apply_override(k, v.is_string() ? v.get<std::string>()
                                            : v.dump());
      }
    }
  }
  cfg.validate_paths();
  if (!cfg.speed_map.empty())
    cfg.speeds = speed_map_from_json(read_json_file(cfg.speed_map));
  return cfg;
}

inline void ProjectConfig::validate_paths() const {
  if (!fs::exists(source))
    throw ConfigError("config: source not found: " + source.string());
  if (!fs::is_directory(repo_dir))
    throw ConfigError("config: repo_dir not found: " + repo_dir.string());
  if (!annotations_dir.empty() && !fs::is_directory(annotations_dir))
    throw ConfigError("config: annotations_dir not found: " +
                      annotations_dir.string());
  if (!speed_map.empty() && !fs::exists(speed_map))
    throw ConfigError("config: speed_map file not found: " +
                      speed_map.string());
}

inline void ProjectConfig::apply_override(const std::string& key,
                                          const std::string& value) {
  auto as_double = [&]() {
    try {
      return std::stod(value);
    } catch (const std::exception&) {
      throw ConfigError("config: '" + key + "' expects a number, got '" +
                        value + "'");
    }
  };
  auto as_int = [&]() {
    try {
      return std::stoi(value);
    } catch (const std::exception&) {
      throw ConfigError("config: '" + key + "' expects an integer, got '" +
                        value + "'");
    }
  };
  if (key == "cut_threshold") params.shot.cut_threshold = as_double();
  else if (key == "fade_window") params.shot.fade_window = as_int();
  else if (key == "fade_threshold") params.shot.fade_threshold = as_double();
  else if (key == "min_shot_len") params.shot.min_shot_len = as_int();
  else if (key == "scene_match_threshold")
    params.shot.scene_match_threshold = as_int();
  else if (key == "fast_threshold") {
    params.scene.fast_threshold = as_int();
    params.track.fast_threshold = params.scene.fast_threshold;
  } else if (key == "max_keypoints") {
    params.scene.max_keypoints = as_int();
    params.track.max_keypoints = params.scene.max_keypoints;
  } else if (key == "match_ratio") {
    params.scene.match_ratio = as_double();
    params.track.match_ratio = params.scene.match_ratio;
  } else if (key == "track_inlier_px") {
    params.track.inlier_px = as_double();
  } else if (key == "scene_inlier_px") {
    params.scene.inlier_px = as_double();
  } else if (key == "ransac_max_iters") {
    params.track.max_iters = as_int();
    params.scene.max_iters = params.track.max_iters;
  } else if (key == "track_stride") {
    params.track.stride = as_int();
  } else if (key == "background_max") {
    params.label.background_max = as_double();
  } else if (key == "single_focus_max") {
    params.label.single_focus_max = as_double();
  } else if (key == "aspect_tolerance") {
    params.retrieval.aspect_tolerance = as_double();
  } else if (key == "max_mosaic_area") {
    params.max_mosaic_area = static_cast<std::int64_t>(std::llround(as_double()));
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(std::llround(as_double()));
  } else {
    throw ConfigError("config: unknown parameter '" + key + "'");
  }
}

inline json ProjectConfig::to_json() const {
  json salient = json::array();
  for (const std::string& s : params.label.salient_labels) salient.push_back(s);
  return {{"source", source.string()},
          {"repo_dir", repo_dir.string()},
          {"annotations_dir", annotations_dir.string()},
          {"speed_map", speed_map.string()},
          {"seed", seed},
          {"params",
           {{"cut_threshold", params.shot.cut_threshold},
            {"fade_window", params.shot.fade_window},
            {"fade_threshold", params.shot.fade_threshold},
            {"min_shot_len", params.shot.min_shot_len},
            {"scene_match_threshold", params.shot.scene_match_threshold},
            {"fast_threshold", params.track.fast_threshold},
            {"max_keypoints", params.track.max_keypoints},
            {"match_ratio", params.track.match_ratio},
            {"track_inlier_px", params.track.inlier_px},
            {"scene_inlier_px", params.scene.inlier_px},
            {"ransac_max_iters", params.track.max_iters},
            {"track_stride", params.track.stride},
            {"salient_labels", salient},
            {"background_max", params.label.background_max},
            {"single_focus_max", params.label.single_focus_max},
            {"aspect_tolerance", params.retrieval.aspect_tolerance},
            {"max_mosaic_area", params.max_mosaic_area}}}};
}

/// Fingerprint of the computation inputs; deliberately excludes output_dir
/// so identical work in different directories fingerprints identically.
inline std::string ProjectConfig::fingerprint() const {
  return fnv1a64_hex(to_json().dump());
}

// --- shared pipeline helpers -------------------------------------------------

namespace detail {

/// Advisory lock on an output directory; concurrent stages on the same
/// directory are unsupported.
class OutputLock {
 public:
  explicit OutputLock(const fs::path& output_dir)
      : path_(output_dir / ".restyle.lock") {
    fs::create_directories(output_dir);
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0)
      throw ConfigError("output dir is locked by another run (remove " +
                        path_.string() + " if stale)");
  }
  ~OutputLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

inline FrameSequence load_sequence(const fs::path& path) {
  if (fs::is_directory(path)) return read_frame_dir(path);
  if (path.extension() == ".y4m") return read_y4m_file(path);
  throw Error("unsupported clip format (need .y4m or a PNG frame dir): " +
              path.string());
}

inline std::vector<ForegroundAnnotation> load_annotations(
    const fs::path& annotations_dir, const std::string& source_id) {
  if (annotations_dir.empty()) return {};
  fs::path p = annotations_dir / (source_id + ".json");
  if (!fs::exists(p)) return {};
  return annotations_from_json(read_json_file(p));
}

inline std::vector<fs::path> list_repo_clips(const fs::path& repo_dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(repo_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".y4m")
      out.push_back(entry.path());
    else if (entry.is_directory() && fs::exists(entry.path() / "meta.json"))
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string mosaic_file_name(int shot_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "shot_%03d.png", shot_index);
  return buf;
}

inline ForegroundAnnotation annotation_at(
    std::span<const ForegroundAnnotation> anns, int frame) {
  for (const ForegroundAnnotation& a : anns)
    if (a.frame == frame) return a;
  return {frame, {}};
}

/// Union box of salient detections on the earliest annotated frame below
/// `max_frame`; used to aim single-focus framing at the target content.
inline std::optional<Rect> salient_content_box(
    std::span<const ForegroundAnnotation> anns, int max_frame,
    const LabelParams& label_params) {
  std::optional<int> best_frame;
  for (const ForegroundAnnotation& a : anns) {
    if (a.frame >= max_frame) continue;
    bool salient = std::any_of(a.boxes.begin(), a.boxes.end(),
                               [&](const Box& b) {
                                 return label_params.salient_labels.count(
                                     b.label);
                               });
    if (salient && (!best_frame || a.frame < *best_frame))
      best_frame = a.frame;
  }
  if (!best_frame) return std::nullopt;
  Rect r{1e300, 1e300, -1e300, -1e300};
  for (const ForegroundAnnotation& a : anns) {
    if (a.frame != *best_frame) continue;
    for (const Box& b : a.boxes) {
      if (!label_params.salient_labels.count(b.label)) continue;
      r.x0 = std::min(r.x0, b.x);
      r.y0 = std::min(r.y0, b.y);
      r.x1 = std::max(r.x1, b.x + b.w);
      r.y1 = std::max(r.y1, b.y + b.h);
    }
  }
  return r;
}

struct AnalyzeResult {
  FrameSequence seq;
  std::vector<Shot> shots;
  std::vector<ShotStyle> styles;
};

inline AnalyzeResult analyze_impl(const ProjectConfig& cfg) {
  AnalyzeResult out;
  try {
    out.seq = load_sequence(cfg.source);
  } catch (const Error& e) {
    throw Error(std::string("analyze: ") + e.what());
  }
  const FrameSequence& seq = out.seq;
  std::vector<ForegroundAnnotation> anns =
      load_annotations(cfg.annotations_dir, seq.source_id);

  SceneMatchParams scene = cfg.params.scene;
  scene.seed = cfg.seed;
  out.shots =
      group_scenes(seq, detect_shots(seq, cfg.params.shot), cfg.params.shot,
                   scene);

  for (std::size_t i = 0; i < out.shots.size(); ++i) {
    const Shot& shot = out.shots[i];
    std::span<const Frame> frames(seq.frames.data() + shot.start,
                                  static_cast<std::size_t>(shot.length()));
    TrackParams tp = cfg.params.track;
    tp.seed = cfg.seed + 1000003ull * static_cast<std::uint64_t>(i);
    HomographyTrack track = track_camera(frames, anns, tp, shot.start);

    std::vector<ForegroundAnnotation> samples;
    for (int fi : sample_frame_indices(shot.start, shot.end))
      samples.push_back(annotation_at(anns, fi));
    ContentLabel label = label_scene(samples, cfg.params.label);

    out.styles.push_back(assemble_style(
        shot, std::move(track), std::move(label), brightness_curve(frames),
        cfg.speeds, static_cast<int>(i), seq.width(), seq.height()));
  }
  return out;
}

inline void persist_analyze(const ProjectConfig& cfg,
                            const AnalyzeResult& result) {
  write_json_file(cfg.output_dir / "shots.json", shots_to_json(result.shots));
  write_json_file(cfg.output_dir / "styles.json",
                  styles_to_json(result.styles));
}

inline RepoIndex index_impl(const ProjectConfig& cfg) {
  std::vector<fs::path> paths = list_repo_clips(cfg.repo_dir);
  if (paths.empty())
    throw Error("index: repo_dir contains no clips: " + cfg.repo_dir.string());
  std::vector<FrameSequence> seqs;
  std::vector<std::vector<ForegroundAnnotation>> anns;
  for (const fs::path& p : paths) {
    try {
      seqs.push_back(load_sequence(p));
    } catch (const Error& e) {
      throw Error("index: clip '" + p.string() + "' failed to decode: " +
                  e.what());
    }
    anns.push_back(
        load_annotations(cfg.annotations_dir, seqs.back().source_id));
  }
  std::vector<RepoClipSource> sources;
  sources.reserve(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i)
    sources.push_back({&seqs[i], anns[i]});
  return index_repository(sources, cfg.params.label);
}

inline void write_mosaics(const ProjectConfig& cfg, const FrameSequence& seq,
                          const std::vector<ShotStyle>& styles,
                          bool only_missing) {
  fs::path dir = cfg.output_dir / "mosaics";
  fs::create_directories(dir);
  for (std::size_t i = 0; i < styles.size(); ++i) {
    fs::path file = dir / mosaic_file_name(static_cast<int>(i));
    if (only_missing && fs::exists(file)) continue;
    const Shot& shot = styles[i].shot;
    std::span<const Frame> frames(seq.frames.data() + shot.start,
                                  static_cast<std::size_t>(shot.length()));
    try {
      write_png(file, render_mosaic(frames, styles[i].track,
                                    cfg.params.max_mosaic_area));
    } catch (const Error& e) {
      std::cerr << "warning: mosaic for shot " << i << " skipped: "
                << e.what() << "\n";
    }
  }
}

struct RepoCache {
  std::map<std::string, FrameSequence> clips;
  std::map<std::string, std::vector<ForegroundAnnotation>> annotations;

  // Resolve a clip id to its path without decoding pixels.
  static std::string id_of(const fs::path& p) {
    if (fs::is_directory(p)) {
      json meta = read_json_file(p / "meta.json");
      return meta.value("source_id", p.filename().string());
    }
    return p.stem().string();
  }

  const FrameSequence& get(const ProjectConfig& cfg, const std::string& id) {
    auto it = clips.find(id);
    if (it != clips.end()) return it->second;
    for (const fs::path& p : list_repo_clips(cfg.repo_dir)) {
      if (id_of(p) != id) continue;
      FrameSequence seq = load_sequence(p);
      annotations[id] = load_annotations(cfg.annotations_dir, id);
      return clips.emplace(id, std::move(seq)).first->second;
    }
    throw Error("transfer: clip '" + id + "' not found in repo_dir");
  }
};

}  // namespace detail

// --- commands ----------------------------------------------------------------

/// Segment the source, extract per-shot styles, and persist shots.json,
/// styles.json, and the per-shot mosaic gallery.
inline void cmd_analyze(const ProjectConfig& cfg) {
  detail::OutputLock lock(cfg.output_dir);
  detail::AnalyzeResult result = detail::analyze_impl(cfg);
  detail::persist_analyze(cfg, result);
  detail::write_mosaics(cfg, result.seq, result.styles, false);
}

/// Index every clip in repo_dir into index.json.
inline void cmd_index(const ProjectConfig& cfg) {
  detail::OutputLock lock(cfg.output_dir);
  write_json_file(cfg.output_dir / "index.json",
                  index_to_json(detail::index_impl(cfg)));
}

/// Select footage for every source shot, render the output video, and
/// persist plan.json + output.y4m. Missing upstream artifacts are built
/// on demand; existing ones are reused untouched.
inline void cmd_transfer(const ProjectConfig& cfg) {
  detail::OutputLock lock(cfg.output_dir);

  if (!fs::exists(cfg.output_dir / "styles.json") ||
      !fs::exists(cfg.output_dir / "shots.json")) {
    detail::AnalyzeResult result = detail::analyze_impl(cfg);
    detail::persist_analyze(cfg, result);
    detail::write_mosaics(cfg, result.seq, result.styles, false);
  }
  if (!fs::exists(cfg.output_dir / "index.json"))
    write_json_file(cfg.output_dir / "index.json",
                    index_to_json(detail::index_impl(cfg)));

  std::vector<ShotStyle> styles =
      styles_from_json(read_json_file(cfg.output_dir / "styles.json"));
  RepoIndex index =
      index_from_json(read_json_file(cfg.output_dir / "index.json"));

  FrameSequence source_seq = detail::load_sequence(cfg.source);
  FrameSequence output;
  output.frame_rate = source_seq.frame_rate;
  output.source_id = source_seq.source_id + "_restyled";

  detail::RepoCache cache;
  EditPlan plan;
  plan.config_fingerprint = cfg.fingerprint();
  for (std::size_t i = 0; i < styles.size(); ++i) {
    const ShotStyle& style = styles[i];
    Selection sel;
    try {
      sel = select_footage(style, index, cfg.params.retrieval);
    } catch (const Error& e) {
      throw Error("transfer: shot " + std::to_string(i) + ": " + e.what());
    }
    const FrameSequence& clip = cache.get(cfg, sel.source_id);
    std::span<const ForegroundAnnotation> clip_anns =
        cache.annotations[sel.source_id];

    int needed = resample_index(style.speed, style.length() - 1,
                                static_cast<int>(clip.frames.size())) +
                 1;
    std::span<const Frame> target_frames(clip.frames.data(),
                                         static_cast<std::size_t>(needed));
    TrackParams tp = cfg.params.track;
    tp.seed = cfg.seed + 7000003ull * static_cast<std::uint64_t>(i);
    HomographyTrack target_track =
        track_camera(target_frames, clip_anns, tp, 0);

    std::optional<Rect> content;
    if (style.label.category == ContentCategory::single_focus)
      content = detail::salient_content_box(clip_anns, needed,
                                            cfg.params.label);
    FramingSolution framing;
    try {
      framing = solve_framing(style, clip.width(), clip.height(), content);
    } catch (const Error& e) {
      throw Error("transfer: shot " + std::to_string(i) + ": " + e.what());
    }
    RenderedShot rendered = render_shot(style, clip, target_track, framing);

    for (Frame& f : rendered.frames) {
      f.index = static_cast<int>(output.frames.size());
      output.frames.push_back(std::move(f));
    }
    plan.entries.push_back({static_cast<int>(i), style.shot.start,
                            style.shot.end, sel.source_id, sel.start_offset,
                            framing, style.speed,
                            to_string(style.label.category),
                            style.track.degraded()});
  }

  if (output.frames.size() != source_seq.frames.size())
    throw Error("transfer: output length " +
                std::to_string(output.frames.size()) +
                " != source length " +
                std::to_string(source_seq.frames.size()));
  write_y4m_file(cfg.output_dir / "output.y4m", output);
  write_json_file(cfg.output_dir / "plan.json", plan_to_json(plan));
}

/// Emit the review bundle: side_by_side.y4m, timeline.json, and the
/// mosaic gallery (regenerating any missing mosaic from styles.json).
inline void cmd_review(const ProjectConfig& cfg) {
  detail::OutputLock lock(cfg.output_dir);
  fs::path plan_path = cfg.output_dir / "plan.json";
  if (!fs::exists(plan_path))
    throw Error("review: plan.json missing; run transfer first");
  EditPlan plan = plan_from_json(read_json_file(plan_path));

  FrameSequence source_seq = detail::load_sequence(cfg.source);
  FrameSequence output_seq =
      read_y4m_file(cfg.output_dir / "output.y4m");

  // Side-by-side: source left, output right, letterboxed to a common height.
  const int h = std::max(source_seq.height(), output_seq.height());
  const int w = source_seq.width() + output_seq.width();
  const std::size_t n =
      std::min(source_seq.frames.size(), output_seq.frames.size());
  FrameSequence side;
  side.frame_rate = source_seq.frame_rate;
  side.source_id = source_seq.source_id + "_review";
  for (std::size_t t = 0; t < n; ++t) {
    Frame f = make_frame(w, h);
    auto blit = [&](const Frame& src, int x_off) {
      int y_off = (h - src.height) / 2;
      for (int y = 0; y < src.height; ++y)
        std::copy_n(src.px(0, y), static_cast<std::size_t>(src.width) * 3,
                    f.px(x_off, y + y_off));
    };
    blit(source_seq.frames[t], 0);
    blit(output_seq.frames[t], source_seq.width());
    f.index = static_cast<int>(t);
    side.frames.push_back(std::move(f));
  }
  write_y4m_file(cfg.output_dir / "side_by_side.y4m", side);

  // Timeline: aligned boundary lists; durations transfer exactly, so the
  // two lists coincide.
  json src_bounds = json::array();
  json out_bounds = json::array();
  json transitions = json::array();
  int cursor = 0;
  for (const EditPlanEntry& e : plan.entries) {
    src_bounds.push_back(e.start);
    out_bounds.push_back(cursor);
    cursor += e.end - e.start;
  }
  src_bounds.push_back(plan.entries.empty() ? 0 : plan.entries.back().end);
  out_bounds.push_back(cursor);
  std::vector<Shot> shots =
      shots_from_json(read_json_file(cfg.output_dir / "shots.json"));
  for (const Shot& s : shots) transitions.push_back(to_string(s.transition_in));
  json timeline = {
      {"frame_rate",
       {{"num", source_seq.frame_rate.num}, {"den", source_seq.frame_rate.den}}},
      {"source",
       {{"boundaries", src_bounds},
        {"length", static_cast<int>(source_seq.frames.size())},
        {"transitions", transitions}}},
      {"output",
       {{"boundaries", out_bounds},
        {"length", static_cast<int>(output_seq.frames.size())}}}};
  write_json_file(cfg.output_dir / "timeline.json", timeline);

  std::vector<ShotStyle> styles =
      styles_from_json(read_json_file(cfg.output_dir / "styles.json"));
  detail::write_mosaics(cfg, source_seq, styles, true);
}

}  // namespace restyle
