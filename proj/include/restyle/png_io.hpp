/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "restyle/common.hpp"
#include "restyle/image.hpp"

namespace restyle {

/// Decode any PNG into 8-bit RGB via libpng's simplified API.
inline Frame read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str()))
    throw Error("png: cannot read " + path.string() + ": " + img.message);
  img.format = PNG_FORMAT_RGB;
  Frame f;
  f.width = static_cast<int>(img.width);
  f.height = static_cast<int>(img.height);
  f.pixels.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, f.pixels.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error("png: decode failed for " + path.string() + ": " + msg);
  }
  return f;
}

inline void write_png(const std::filesystem::path& path, const Frame& f) {
  validate_frame(f);
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(f.width);
  img.height = static_cast<png_uint_32>(f.height);
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0,
                               f.pixels.data(), 0, nullptr))
    throw Error("png: cannot write " + path.string() + ": " + img.message);
}

namespace detail {

inline std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.png", index);
  return buf;
}

}  // namespace detail

/// Read a PNG frame directory: frame_000000.png, frame_000001.png, ...
/// plus meta.json {fps_num, fps_den, source_id}. Gaps, mixed dimensions,
/// and a missing meta file are all hard errors.
inline FrameSequence read_frame_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error("frame dir: not a directory: " + dir.string());
  fs::path meta_path = dir / "meta.json";
  if (!fs::exists(meta_path))
    throw Error("frame dir: missing meta.json in " + dir.string());
  nlohmann::json meta;
  {
    std::ifstream in(meta_path);
    try {
      in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw Error("frame dir: invalid meta.json in " + dir.string() + ": " +
                  e.what());
    }
  }
  FrameSequence seq;
  try {
    seq.frame_rate.num = meta.at("fps_num").get<int>();
    seq.frame_rate.den = meta.at("fps_den").get<int>();
    seq.source_id = meta.value("source_id", dir.filename().string());
  } catch (const nlohmann::json::exception& e) {
    throw Error("frame dir: meta.json misses fps fields in " + dir.string() +
                ": " + e.what());
  }
  if (seq.frame_rate.num <= 0 || seq.frame_rate.den <= 0)
    throw Error("frame dir: nonpositive frame rate in " + meta_path.string());

  std::vector<int> indices;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.size() == 16 && name.compare(0, 6, "frame_") == 0 &&
        name.compare(12, 4, ".png") == 0)
      indices.push_back(std::stoi(name.substr(6, 6)));
  }
  std::sort(indices.begin(), indices.end());
  if (indices.empty())
    throw Error("frame dir: no frame_*.png files in " + dir.string());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] != static_cast<int>(i))
      throw Error("frame dir: nonconsecutive frame indices in " +
                  dir.string() + " (expected " + std::to_string(i) +
                  ", found " + std::to_string(indices[i]) + ")");
  }

  for (std::size_t i = 0; i < indices.size(); ++i) {
    Frame f = read_png(dir / detail::frame_file_name(static_cast<int>(i)));
    f.index = static_cast<int>(i);
    if (i > 0 && (f.width != seq.width() || f.height != seq.height()))
      throw Error("frame dir: mixed frame dimensions in " + dir.string() +
                  " at frame " + std::to_string(i));
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

inline void write_frame_dir(const std::filesystem::path& dir,
                            const FrameSequence& seq) {
  validate_sequence(seq);
  std::filesystem::create_directories(dir);
  nlohmann::json meta{{"fps_num", seq.frame_rate.num},
                      {"fps_den", seq.frame_rate.den},
                      {"source_id", seq.source_id}};
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << "\n";
  for (const Frame& f : seq.frames)
    write_png(dir / detail::frame_file_name(f.index), f);
}

}  // namespace restyle
