/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "restyle/common.hpp"
#include "restyle/image.hpp"

// YUV4MPEG2 reader/writer. Streams decode to full-range 8-bit RGB via
// BT.601; C444 and the C420 family are accepted, everything else is
// rejected. The writer always emits C444 so that pixel data survives a
// round trip within +/-1 per channel.

namespace restyle {

namespace detail {

inline std::uint8_t clamp_u8(double v) {
  long r = std::lround(v);
  return static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
}

inline void yuv_to_rgb(double y, double u, double v, std::uint8_t* rgb) {
  rgb[0] = clamp_u8(y + 1.402 * (v - 128.0));
  rgb[1] = clamp_u8(y - 0.344136 * (u - 128.0) - 0.714136 * (v - 128.0));
  rgb[2] = clamp_u8(y + 1.772 * (u - 128.0));
}

inline void rgb_to_yuv(const std::uint8_t* rgb, std::uint8_t* yuv) {
  double r = rgb[0], g = rgb[1], b = rgb[2];
  yuv[0] = clamp_u8(0.299 * r + 0.587 * g + 0.114 * b);
  yuv[1] = clamp_u8(-0.168736 * r - 0.331264 * g + 0.5 * b + 128.0);
  yuv[2] = clamp_u8(0.5 * r - 0.418688 * g - 0.081312 * b + 128.0);
}

}  // namespace detail

inline FrameSequence parse_y4m(std::span<const std::uint8_t> bytes) {
  const std::size_t size = bytes.size();
  std::size_t pos = 0;

  auto find_newline = [&](std::size_t from) -> std::size_t {
    for (std::size_t i = from; i < size && i < from + 4096; ++i)
      if (bytes[i] == '\n') return i;
    return size;  // treated as missing by callers
  };

  // Signature line: YUV4MPEG2 [W.. H.. F.. I.. A.. C.. X..]*
  std::size_t eol = find_newline(0);
  if (eol == size) throw ParseError("y4m: missing or unterminated header", 0);
  std::string header(reinterpret_cast<const char*>(bytes.data()), eol);
  const std::string magic = "YUV4MPEG2";
  if (header.compare(0, magic.size(), magic) != 0)
    throw ParseError("y4m: stream does not begin with YUV4MPEG2", 0);

  int width = -1, height = -1;
  Fraction rate{-1, 1};
  bool is420 = true;  // Y4M default colorspace when no C tag is present
  std::size_t tok_start = magic.size();
  while (tok_start < header.size()) {
    if (header[tok_start] == ' ') {
      ++tok_start;
      continue;
    }
    std::size_t tok_end = header.find(' ', tok_start);
    if (tok_end == std::string::npos) tok_end = header.size();
    std::string tok = header.substr(tok_start, tok_end - tok_start);
    char tag = tok[0];
    std::string val = tok.substr(1);
    try {
      switch (tag) {
        case 'W':
          width = std::stoi(val);
          break;
        case 'H':
          height = std::stoi(val);
          break;
        case 'F': {
          std::size_t colon = val.find(':');
          if (colon == std::string::npos) throw std::invalid_argument("F");
          rate.num = std::stoi(val.substr(0, colon));
          rate.den = std::stoi(val.substr(colon + 1));
          break;
        }
        case 'C':
          if (val == "444") {
            is420 = false;
          } else if (val == "420" || val == "420jpeg" || val == "420mpeg2" ||
                     val == "420paldv") {
            is420 = true;
          } else {
            throw ParseError("y4m: unsupported colorspace C" + val, tok_start);
          }
          break;
        default:
          break;  // I, A, X and friends are ignored
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("y4m: malformed header parameter '" + tok + "'",
                       tok_start);
    }
    tok_start = tok_end;
  }
  if (width <= 0 || height <= 0)
    throw ParseError("y4m: header lacks valid W/H parameters", 0);
  if (rate.num <= 0 || rate.den <= 0)
    throw ParseError("y4m: header lacks a valid F parameter", 0);
  pos = eol + 1;

  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  const int cw = (width + 1) / 2;
  const int ch = (height + 1) / 2;
  const std::size_t chroma_size =
      is420 ? static_cast<std::size_t>(cw) * ch : luma_size;
  const std::size_t payload = luma_size + 2 * chroma_size;

  FrameSequence seq;
  seq.frame_rate = rate;
  while (pos < size) {
    std::size_t rec_start = pos;
    std::size_t rec_eol = find_newline(pos);
    if (rec_eol == size)
      throw ParseError("y4m: unterminated FRAME record", rec_start);
    std::string rec(reinterpret_cast<const char*>(bytes.data() + pos),
                    rec_eol - pos);
    if (rec.compare(0, 5, "FRAME") != 0 ||
        (rec.size() > 5 && rec[5] != ' '))
      throw ParseError("y4m: expected FRAME record", rec_start);
    pos = rec_eol + 1;
    if (size - pos < payload)
      throw ParseError("y4m: truncated frame payload (frame " +
                           std::to_string(seq.frames.size()) + ")",
                       size);

    const std::uint8_t* yp = bytes.data() + pos;
    const std::uint8_t* up = yp + luma_size;
    const std::uint8_t* vp = up + chroma_size;

    Frame f;
    f.width = width;
    f.height = height;
    f.index = static_cast<int>(seq.frames.size());
    f.pixels.resize(luma_size * 3);
    if (!is420) {
      for (std::size_t i = 0; i < luma_size; ++i)
        detail::yuv_to_rgb(yp[i], up[i], vp[i], &f.pixels[i * 3]);
    } else {
      // Bilinear chroma upsampling, centered (JPEG) siting.
      auto chroma_at = [&](const std::uint8_t* plane, double cx,
                           double cy) -> double {
        int x0 = static_cast<int>(std::floor(cx));
        int y0 = static_cast<int>(std::floor(cy));
        double fx = cx - x0, fy = cy - y0;
        auto cl = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };
        int xa = cl(x0, cw), xb = cl(x0 + 1, cw);
        int ya = cl(y0, ch), yb = cl(y0 + 1, ch);
        double v00 = plane[static_cast<std::size_t>(ya) * cw + xa];
        double v10 = plane[static_cast<std::size_t>(ya) * cw + xb];
        double v01 = plane[static_cast<std::size_t>(yb) * cw + xa];
        double v11 = plane[static_cast<std::size_t>(yb) * cw + xb];
        return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 +
               (1 - fx) * fy * v01 + fx * fy * v11;
      };
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          double cx = (x - 0.5) / 2.0;
          double cy = (y - 0.5) / 2.0;
          std::size_t i = static_cast<std::size_t>(y) * width + x;
          detail::yuv_to_rgb(yp[i], chroma_at(up, cx, cy),
                             chroma_at(vp, cx, cy), &f.pixels[i * 3]);
        }
      }
    }
    seq.frames.push_back(std::move(f));
    pos += payload;
  }
  return seq;
}

inline std::vector<std::uint8_t> write_y4m(const FrameSequence& seq) {
  if (seq.frames.empty()) throw Error("y4m: refusing to write empty sequence");
  validate_sequence(seq);
  const int w = seq.width();
  const int h = seq.height();
  std::string header = "YUV4MPEG2 W" + std::to_string(w) + " H" +
                       std::to_string(h) + " F" +
                       std::to_string(seq.frame_rate.num) + ":" +
                       std::to_string(seq.frame_rate.den) + " Ip A1:1 C444\n";
  const std::size_t luma_size = static_cast<std::size_t>(w) * h;
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + seq.frames.size() * (luma_size * 3 + 6));
  out.insert(out.end(), header.begin(), header.end());
  for (const Frame& f : seq.frames) {
    const char* rec = "FRAME\n";
    out.insert(out.end(), rec, rec + 6);
    std::size_t base = out.size();
    out.resize(base + luma_size * 3);
    std::uint8_t* yp = out.data() + base;
    std::uint8_t* up = yp + luma_size;
    std::uint8_t* vp = up + luma_size;
    for (std::size_t i = 0; i < luma_size; ++i) {
      std::uint8_t yuv[3];
      detail::rgb_to_yuv(&f.pixels[i * 3], yuv);
      yp[i] = yuv[0];
      up[i] = yuv[1];
      vp[i] = yuv[2];
    }
  }
  return out;
}

inline FrameSequence read_y4m_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("y4m: cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  FrameSequence seq;
  try {
    seq = parse_y4m(bytes);
  } catch (const ParseError& e) {
    throw ParseError::prefixed(path.string() + ": ", e);
  }
  seq.source_id = path.stem().string();
  return seq;
}

inline void write_y4m_file(const std::filesystem::path& path,
                           const FrameSequence& seq) {
  std::vector<std::uint8_t> bytes = write_y4m(seq);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("y4m: cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("y4m: short write to " + path.string());
}

}  // namespace restyle
