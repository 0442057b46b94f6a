/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "restyle/motion.hpp"
#include "testutil.hpp"

using namespace restyle;

namespace {

// Copy a block of `src` into `dst` at (x, y), clipped to dst bounds.
void paste(Frame& dst, const Frame& src, int x, int y) {
  for (int sy = 0; sy < src.height; ++sy) {
    int dy = y + sy;
    if (dy < 0 || dy >= dst.height) continue;
    for (int sx = 0; sx < src.width; ++sx) {
      int dx = x + sx;
      if (dx < 0 || dx >= dst.width) continue;
      const std::uint8_t* s = src.px(sx, sy);
      std::uint8_t* d = dst.px(dx, dy);
      d[0] = s[0];
      d[1] = s[1];
      d[2] = s[2];
    }
  }
}

struct DistractorClip {
  FrameSequence seq;
  std::vector<Homography> truth;
  std::vector<ForegroundAnnotation> annotations;
};

// Background pans +2 px/frame; a high-contrast 96x96 patch (~14% of the
// frame) slides the opposite way at +3 px/frame and is annotated as a
// person box.
DistractorClip make_distractor_clip(int frames) {
  DistractorClip out;
  Frame master = testutil::make_detail_texture(512, 512, 17, 90, 166);
  Frame patch = testutil::make_detail_texture(96, 96, 99, 0, 255);
  out.truth = testutil::pan_truth(frames, 2.0, 0.0);
  out.seq = testutil::synth_clip(master, out.truth, 60.0, 120.0, 256, 256);
  for (int t = 0; t < frames; ++t) {
    int x = 40 + 3 * t;
    paste(out.seq.frames[static_cast<std::size_t>(t)], patch, x, 80);
    ForegroundAnnotation ann;
    ann.frame = t;
    ann.boxes.push_back({static_cast<double>(x) - 2.0, 78.0, 100.0, 100.0,
                         "person"});
    out.annotations.push_back(std::move(ann));
  }
  return out;
}

TrackParams distractor_params() {
  TrackParams p;
  p.max_keypoints = 350;
  return p;
}

}  // namespace

TEST_CASE("a static textured shot tracks as identity", "[motion]") {
  Frame master = testutil::make_detail_texture(300, 300, 4);
  std::vector<Homography> truth(10);  // identities
  FrameSequence seq = testutil::synth_clip(master, truth, 20.0, 20.0, 256, 256);
  HomographyTrack track = track_camera(seq.frames, {}, {});
  REQUIRE(track.size() == 10);
  CHECK_FALSE(track.degraded());
  for (std::size_t t = 0; t < 10; ++t) {
    CHECK((track.steps[t].matrix() - Mat3::Identity()).cwiseAbs().maxCoeff() <
          1e-3);
    CHECK((track.cumulative[t].matrix() - Mat3::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-3);
  }
}

TEST_CASE("a synthetic pan is recovered to subpixel accuracy", "[motion]") {
  Frame master = testutil::make_detail_texture(512, 512, 12);
  std::vector<Homography> truth = testutil::pan_truth(30, 2.0, 0.0);
  FrameSequence seq = testutil::synth_clip(master, truth, 60.0, 120.0, 256, 256);
  HomographyTrack track = track_camera(seq.frames, {}, {});
  REQUIRE(track.size() == 30);
  CHECK_FALSE(track.degraded());
  // cumulative[29] maps frame-29 corners 58 px along x in start coords.
  CHECK(testutil::max_corner_error(track.cumulative[29],
                                   Homography::translation(58.0, 0.0), 256,
                                   256) < 1.5);
  CHECK(testutil::max_track_error(track, truth, 256, 256) < 1.5);
}

TEST_CASE("annotated foreground keeps the track on the camera motion",
          "[motion]") {
  DistractorClip clip = make_distractor_clip(40);
  HomographyTrack annotated = track_camera(clip.seq.frames, clip.annotations,
                                           distractor_params());
  CHECK(testutil::max_track_error(annotated, clip.truth, 256, 256) < 1.5);
}

TEST_CASE("withholding the annotation lets the distractor corrupt the track",
          "[motion]") {
  DistractorClip clip = make_distractor_clip(40);
  HomographyTrack bare =
      track_camera(clip.seq.frames, {}, distractor_params());
  double worst = 0.0;
  for (std::size_t t = 0; t < clip.truth.size(); ++t)
    worst = std::max(worst, testutil::max_corner_error(
                                bare.cumulative[t], clip.truth[t], 256, 256));
  CHECK(worst > 3.0);
}

TEST_CASE("accumulate of identity steps is all identities", "[motion]") {
  std::vector<Homography> steps(5);
  std::vector<Homography> cumulative = accumulate(steps);
  REQUIRE(cumulative.size() == 5);
  for (const Homography& h : cumulative) CHECK(h.is_identity());
}

TEST_CASE("two unit x steps accumulate to magnitude two", "[motion]") {
  std::vector<Homography> steps = {Homography::identity(),
                                   Homography::translation(1.0, 0.0),
                                   Homography::translation(1.0, 0.0)};
  std::vector<Homography> cumulative = accumulate(steps);
  CHECK(std::abs(cumulative[2].matrix()(0, 2)) == Catch::Approx(2.0));
}

TEST_CASE("accumulate matches the direct matrix product", "[motion]") {
  std::vector<Homography> steps = {
      Homography::identity(), Homography::scaling(1.1),
      Homography::rotation_about(5.0 * M_PI / 180.0, 0.0, 0.0)};
  std::vector<Homography> cumulative = accumulate(steps);
  Mat3 direct = (steps[1].matrix().inverse() * steps[2].matrix().inverse());
  direct /= direct(2, 2);
  Mat3 got = (steps[1].matrix().inverse().eval() *
              steps[2].matrix().inverse().eval());
  // cumulative[2] = steps[1]^-1 * steps[2]^-1, normalized.
  CHECK((cumulative[2].matrix() - direct).cwiseAbs().maxCoeff() < 1e-9);
  (void)got;
}

TEST_CASE("accumulate requires an identity first step", "[motion]") {
  std::vector<Homography> steps = {Homography::translation(1.0, 0.0)};
  CHECK_THROWS_AS(accumulate(steps), Error);
}

TEST_CASE("track wiring: cumulative[t] equals cumulative[t-1] after undoing "
          "the step",
          "[motion]") {
  std::mt19937 rng(19);
  std::vector<Homography> steps = {Homography::identity()};
  for (int t = 1; t < 12; ++t) {
    double dx = static_cast<double>(rng() % 9) - 4.0;
    double dy = static_cast<double>(rng() % 9) - 4.0;
    double s = 0.95 + 0.01 * static_cast<double>(rng() % 11);
    steps.push_back(Homography::scale_offset(s, dx, dy));
  }
  std::vector<Homography> cumulative = accumulate(steps);
  for (std::size_t t = 1; t < steps.size(); ++t)
    for (int k = 0; k < 10; ++k) {
      Vec2 p(static_cast<double>(rng() % 200),
             static_cast<double>(rng() % 200));
      Vec2 a = cumulative[t].apply(p);
      Vec2 b = cumulative[t - 1].apply(steps[t].inverse().apply(p));
      CHECK((a - b).norm() < 1e-6);
    }
}

TEST_CASE("accumulating a concatenation composes the partial tracks",
          "[motion]") {
  std::mt19937 rng(23);
  std::vector<Homography> steps = {Homography::identity()};
  for (int t = 1; t < 10; ++t)
    steps.push_back(Homography::translation(
        static_cast<double>(rng() % 7) - 3.0,
        static_cast<double>(rng() % 7) - 3.0));
  std::vector<Homography> full = accumulate(steps);
  const std::size_t split = 4;
  std::vector<Homography> tail = {Homography::identity()};
  tail.insert(tail.end(), steps.begin() + split + 1, steps.end());
  std::vector<Homography> tail_cum = accumulate(tail);
  for (std::size_t j = 0; j < tail_cum.size(); ++j) {
    Homography expect = full[split] * tail_cum[j];
    CHECK((full[split + j].matrix() - expect.matrix()).cwiseAbs().maxCoeff() <
          1e-9);
  }
}

TEST_CASE("mosaic bounds of a static track equal the frame rectangle",
          "[motion]") {
  HomographyTrack track;
  track.steps.assign(3, Homography::identity());
  track.cumulative = accumulate(track.steps);
  track.fallback.assign(3, false);
  Rect r = mosaic_bounds(track, 100, 50);
  CHECK(r.x0 == Catch::Approx(0.0));
  CHECK(r.y0 == Catch::Approx(0.0));
  CHECK(r.x1 == Catch::Approx(100.0));
  CHECK(r.y1 == Catch::Approx(50.0));
}

TEST_CASE("mosaic bounds of a pan sweep the panned distance", "[motion]") {
  HomographyTrack track;
  for (int t = 0; t < 5; ++t) {
    track.steps.push_back(t == 0 ? Homography::identity()
                                 : Homography::translation(-10.0, 0.0));
  }
  track.cumulative = accumulate(track.steps);
  track.fallback.assign(5, false);
  Rect r = mosaic_bounds(track, 100, 50);
  CHECK(r.x0 == Catch::Approx(0.0));
  CHECK(r.x1 == Catch::Approx(140.0));
  CHECK(r.y1 == Catch::Approx(50.0));
}

TEST_CASE("mosaic bounds of a zoom-out stay at the start rectangle",
          "[motion]") {
  HomographyTrack track;
  track.steps.assign(6, Homography::identity());
  track.cumulative.clear();
  for (int t = 0; t < 6; ++t)
    track.cumulative.push_back(Homography::scaling(std::pow(0.9, t)));
  track.fallback.assign(6, false);
  Rect r = mosaic_bounds(track, 100, 50);
  CHECK(r.x0 == Catch::Approx(0.0));
  CHECK(r.y0 == Catch::Approx(0.0));
  CHECK(r.x1 == Catch::Approx(100.0));
  CHECK(r.y1 == Catch::Approx(50.0));
}

TEST_CASE("a single-frame mosaic is the frame itself", "[motion]") {
  Frame f = testutil::make_detail_texture(64, 48, 2);
  HomographyTrack track;
  track.steps.assign(1, Homography::identity());
  track.cumulative = accumulate(track.steps);
  track.fallback.assign(1, false);
  Frame mosaic = render_mosaic(std::span<const Frame>(&f, 1), track);
  REQUIRE(mosaic.width == 64);
  REQUIRE(mosaic.height == 48);
  CHECK(mosaic.pixels == f.pixels);
}

TEST_CASE("a static mosaic keeps the earliest frame on top", "[motion]") {
  FrameSequence seq;
  for (int i = 0; i < 10; ++i) {
    Frame f = testutil::make_detail_texture(64, 48, 40 + static_cast<std::uint32_t>(i));
    f.index = i;
    seq.frames.push_back(std::move(f));
  }
  HomographyTrack track;
  track.steps.assign(10, Homography::identity());
  track.cumulative = accumulate(track.steps);
  track.fallback.assign(10, false);
  Frame mosaic = render_mosaic(seq.frames, track);
  CHECK(mosaic.pixels == seq.frames[0].pixels);  // first write wins
}

TEST_CASE("a two-frame pan mosaic is seamless against the master",
          "[motion]") {
  Frame master = testutil::make_detail_texture(160, 50, 6);
  FrameSequence seq;
  for (int t = 0; t < 2; ++t) {
    Frame f = make_frame(100, 50);
    for (int y = 0; y < 50; ++y)
      std::copy_n(master.px(10 * t, y), 100 * 3, f.px(0, y));
    f.index = t;
    seq.frames.push_back(std::move(f));
  }
  HomographyTrack track;
  track.steps = {Homography::identity(), Homography::translation(-10.0, 0.0)};
  track.cumulative = accumulate(track.steps);
  track.fallback.assign(2, false);
  Frame mosaic = render_mosaic(seq.frames, track);
  REQUIRE(mosaic.width == 110);
  REQUIRE(mosaic.height == 50);
  for (int y = 0; y < 50; ++y)
    for (int x = 0; x < 110; ++x) {
      const std::uint8_t* a = mosaic.px(x, y);
      const std::uint8_t* b = master.px(x, y);
      REQUIRE(static_cast<int>(a[0]) == static_cast<int>(b[0]));
    }
}

TEST_CASE("oversized mosaics are refused", "[motion]") {
  HomographyTrack track;
  track.steps = {Homography::identity(),
                 Homography::translation(-100000.0, 0.0)};
  track.cumulative = accumulate(track.steps);
  track.fallback.assign(2, false);
  std::vector<Frame> frames(2, make_frame(64, 64));
  CHECK_THROWS_WITH(render_mosaic(frames, track),
                    Catch::Matchers::ContainsSubstring("max area"));
}
