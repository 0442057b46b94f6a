/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "restyle/shots.hpp"
#include "testutil.hpp"

using namespace restyle;

namespace {

Frame tinted(const Frame& gray, double fr, double fg, double fb,
             double alpha = 1.0) {
  Frame out = gray;
  for (std::size_t i = 0; i < out.pixels.size(); i += 3) {
    double v = gray.pixels[i];
    auto q = [&](double f) {
      long r = std::lround(v * f * alpha);
      return static_cast<std::uint8_t>(r < 0 ? 0 : (r > 255 ? 255 : r));
    };
    out.pixels[i] = q(fr);
    out.pixels[i + 1] = q(fg);
    out.pixels[i + 2] = q(fb);
  }
  return out;
}

void append(FrameSequence& seq, Frame f) {
  f.index = static_cast<int>(seq.frames.size());
  seq.frames.push_back(std::move(f));
}

}  // namespace

TEST_CASE("histogram of solid frames concentrates in one bin", "[shots]") {
  Histogram black = color_histogram(make_frame(8, 8, 0, 0, 0));
  CHECK(black.bins[0] == Catch::Approx(1.0));
  Histogram white = color_histogram(make_frame(8, 8, 255, 255, 255));
  CHECK(white.bins[511] == Catch::Approx(1.0));
}

TEST_CASE("histogram splits a half-and-half frame evenly", "[shots]") {
  Frame f = make_frame(4, 1, 0, 0, 0);
  for (int x = 2; x < 4; ++x) {
    std::uint8_t* p = f.px(x, 0);
    p[0] = p[1] = p[2] = 255;
  }
  Histogram h = color_histogram(f);
  CHECK(h.bins[0] == Catch::Approx(0.5));
  CHECK(h.bins[511] == Catch::Approx(0.5));
}

TEST_CASE("hist_distance basics", "[shots]") {
  Histogram a;
  a.bins[3] = 1.0;
  CHECK(hist_distance(a, a) == Catch::Approx(0.0));
  Histogram b;
  b.bins[9] = 1.0;
  CHECK(hist_distance(a, b) == Catch::Approx(1.0));
  Histogram c;
  c.bins[3] = 0.5;
  c.bins[9] = 0.5;
  CHECK(hist_distance(a, c) == Catch::Approx(0.5));
  CHECK(hist_distance(c, a) == Catch::Approx(0.5));  // symmetric
}

TEST_CASE("hist_distance stays within [0, 1] on random histograms",
          "[shots]") {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    Histogram a, b;
    double sa = 0, sb = 0;
    for (int k = 0; k < 512; ++k) {
      a.bins[static_cast<std::size_t>(k)] = static_cast<double>(rng() % 100);
      b.bins[static_cast<std::size_t>(k)] = static_cast<double>(rng() % 100);
      sa += a.bins[static_cast<std::size_t>(k)];
      sb += b.bins[static_cast<std::size_t>(k)];
    }
    for (int k = 0; k < 512; ++k) {
      a.bins[static_cast<std::size_t>(k)] /= sa;
      b.bins[static_cast<std::size_t>(k)] /= sb;
    }
    double d = hist_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(hist_distance(b, a) == Catch::Approx(d));
  }
}

TEST_CASE("a red/blue splice yields exactly one hard cut", "[shots]") {
  FrameSequence seq;
  for (int i = 0; i < 20; ++i) append(seq, make_frame(16, 16, 200, 0, 0));
  for (int i = 0; i < 20; ++i) append(seq, make_frame(16, 16, 0, 0, 200));
  std::vector<Shot> shots = detect_shots(seq, {});
  REQUIRE(shots.size() == 2);
  CHECK(shots[0].start == 0);
  CHECK(shots[0].end == 20);
  CHECK(shots[1].start == 20);
  CHECK(shots[1].end == 40);
  CHECK(shots[1].transition_in == Transition::hard_cut);
}

TEST_CASE("an unchanging sequence is a single shot", "[shots]") {
  FrameSequence seq;
  for (int i = 0; i < 40; ++i) append(seq, make_frame(16, 16, 64, 64, 64));
  std::vector<Shot> shots = detect_shots(seq, {});
  REQUIRE(shots.size() == 1);
  CHECK(shots[0].start == 0);
  CHECK(shots[0].end == 40);
}

TEST_CASE("a fade to black anchors its boundary at the luma minimum",
          "[shots]") {
  Frame master = testutil::make_detail_texture(64, 64, 21);
  FrameSequence seq;
  for (int i = 0; i < 20; ++i) append(seq, tinted(master, 1.0, 0.3, 0.3));
  for (int k = 1; k <= 16; ++k)
    append(seq, tinted(master, 1.0, 0.3, 0.3, 1.0 - k / 16.0));
  for (int i = 0; i < 20; ++i) append(seq, tinted(master, 0.3, 0.3, 1.0));
  const int luma_min = 35;  // the all-black fade end

  ShotDetectParams params;
  params.min_shot_len = 1;
  std::vector<Shot> shots = detect_shots(seq, params);
  REQUIRE(shots.size() == 3);
  CHECK(shots[1].start == luma_min);
  CHECK(shots[1].transition_in == Transition::fade);
  CHECK(shots[2].start == luma_min + 1);
  CHECK(shots[2].transition_in == Transition::hard_cut);

  // With the default minimum shot length the 1-frame black shot collapses
  // into a single fade boundary.
  std::vector<Shot> merged = detect_shots(seq, {});
  REQUIRE(merged.size() == 2);
  CHECK(merged[1].start == luma_min);
  CHECK(merged[1].transition_in == Transition::fade);
}

TEST_CASE("shots tile random cut sequences and find every splice",
          "[shots]") {
  std::mt19937 rng(31);
  const int bases[3] = {80, 144, 208};
  for (int trial = 0; trial < 20; ++trial) {
    FrameSequence seq;
    std::set<int> splices;
    int prev_color = -1;
    int nshots = 3 + static_cast<int>(rng() % 4);
    for (int s = 0; s < nshots; ++s) {
      int color;
      do {
        color = static_cast<int>(rng() % 27);
      } while (color == prev_color);
      prev_color = color;
      if (s > 0) splices.insert(static_cast<int>(seq.frames.size()));
      int len = 10 + static_cast<int>(rng() % 16);
      for (int i = 0; i < len; ++i)
        append(seq, testutil::make_noise_frame(24, 24, rng, bases[color % 3],
                                               bases[(color / 3) % 3],
                                               bases[color / 9], 12));
    }
    std::vector<Shot> shots = detect_shots(seq, {});
    REQUIRE(shots.front().start == 0);
    REQUIRE(shots.back().end == static_cast<int>(seq.frames.size()));
    std::set<int> found;
    for (std::size_t i = 0; i < shots.size(); ++i) {
      if (i > 0) {
        CHECK(shots[i].start == shots[i - 1].end);
        found.insert(shots[i].start);
      }
      CHECK(shots[i].start < shots[i].end);
    }
    CHECK(found == splices);
  }
}

TEST_CASE("raising the cut threshold never adds boundaries", "[shots]") {
  std::mt19937 rng(77);
  FrameSequence seq;
  for (int s = 0; s < 5; ++s) {
    int base = 60 + 40 * s;
    for (int i = 0; i < 12; ++i)
      append(seq, testutil::make_noise_frame(24, 24, rng, base, 255 - base,
                                             (base * 3) % 255, 10));
  }
  std::size_t last = std::numeric_limits<std::size_t>::max();
  for (double cut : {0.3, 0.5, 0.7, 0.9}) {
    ShotDetectParams params;
    params.cut_threshold = cut;
    params.fade_threshold = std::min(0.4, cut);
    std::size_t count = detect_shots(seq, params).size();
    CHECK(count <= last);
    last = count;
  }
}

TEST_CASE("re-cut shots of one clip share a scene", "[shots]") {
  Frame master = testutil::make_detail_texture(128, 128, 3);
  FrameSequence seq;
  for (int i = 0; i < 10; ++i) append(seq, master);
  for (int i = 0; i < 10; ++i) append(seq, make_frame(128, 128, 30, 160, 30));
  for (int i = 0; i < 10; ++i) append(seq, master);
  std::vector<Shot> shots = {{0, 10, Transition::hard_cut, -1},
                             {10, 20, Transition::hard_cut, -1},
                             {20, 30, Transition::hard_cut, -1}};
  std::vector<Shot> grouped = group_scenes(seq, shots, {});
  REQUIRE(grouped.size() == 3);
  CHECK(grouped[0].scene_id == 0);
  CHECK(grouped[1].scene_id == 1);  // solid shot has no keypoints
  CHECK(grouped[2].scene_id == 0);
}

TEST_CASE("pixel-identical shots always share a scene", "[shots]") {
  Frame master = testutil::make_detail_texture(96, 96, 8);
  FrameSequence seq;
  for (int i = 0; i < 16; ++i) append(seq, master);
  std::vector<Shot> shots = {{0, 8, Transition::hard_cut, -1},
                             {8, 16, Transition::hard_cut, -1}};
  std::vector<Shot> grouped = group_scenes(seq, shots, {});
  CHECK(grouped[0].scene_id == 0);
  CHECK(grouped[1].scene_id == 0);
}

TEST_CASE("scene grouping matches a transitive-closure oracle", "[shots]") {
  // Four shots: texture A, texture B, A again, B again. The oracle says
  // {0,2} and {1,3} form the two scenes.
  Frame a = testutil::make_detail_texture(96, 96, 100);
  Frame b = testutil::make_detail_texture(96, 96, 200);
  FrameSequence seq;
  for (int i = 0; i < 8; ++i) append(seq, a);
  for (int i = 0; i < 8; ++i) append(seq, b);
  for (int i = 0; i < 8; ++i) append(seq, a);
  for (int i = 0; i < 8; ++i) append(seq, b);
  std::vector<Shot> shots = {{0, 8, Transition::hard_cut, -1},
                             {8, 16, Transition::hard_cut, -1},
                             {16, 24, Transition::hard_cut, -1},
                             {24, 32, Transition::hard_cut, -1}};
  std::vector<Shot> grouped = group_scenes(seq, shots, {});
  CHECK(grouped[0].scene_id == 0);
  CHECK(grouped[1].scene_id == 1);
  CHECK(grouped[2].scene_id == 0);
  CHECK(grouped[3].scene_id == 1);
}

TEST_CASE("invalid shot params are rejected", "[shots]") {
  ShotDetectParams params;
  params.fade_threshold = 0.9;  // above cut_threshold
  FrameSequence seq;
  seq.frames.push_back(make_frame(8, 8));
  CHECK_THROWS_AS(detect_shots(seq, params), ConfigError);
}
