/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "restyle/image.hpp"
#include "restyle/png_io.hpp"
#include "testutil.hpp"

using namespace restyle;

TEST_CASE("luma of primaries and extremes", "[image]") {
  CHECK(luma_of(0, 0, 0) == 0);
  CHECK(luma_of(255, 255, 255) == 255);
  CHECK(luma_of(255, 0, 0) == 76);  // round(0.299 * 255)
  CHECK(luma_of(0, 255, 0) == 150);
  CHECK(luma_of(0, 0, 255) == 29);
}

TEST_CASE("luma is monotone in each channel", "[image]") {
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    int r = static_cast<int>(rng() % 255);
    int g = static_cast<int>(rng() % 255);
    int b = static_cast<int>(rng() % 255);
    std::uint8_t base = luma_of(static_cast<std::uint8_t>(r),
                                static_cast<std::uint8_t>(g),
                                static_cast<std::uint8_t>(b));
    CHECK(luma_of(static_cast<std::uint8_t>(r + 1),
                  static_cast<std::uint8_t>(g),
                  static_cast<std::uint8_t>(b)) >= base);
    CHECK(luma_of(static_cast<std::uint8_t>(r),
                  static_cast<std::uint8_t>(g + 1),
                  static_cast<std::uint8_t>(b)) >= base);
    CHECK(luma_of(static_cast<std::uint8_t>(r),
                  static_cast<std::uint8_t>(g),
                  static_cast<std::uint8_t>(b + 1)) >= base);
  }
}

TEST_CASE("mean luma of simple frames", "[image]") {
  CHECK(mean_luma(make_frame(4, 4, 0, 0, 0)) == 0.0);
  CHECK(mean_luma(make_frame(4, 4, 255, 255, 255)) == 255.0);
  Frame half = make_frame(4, 4, 0, 0, 0);
  for (int y = 0; y < 4; ++y)
    for (int x = 2; x < 4; ++x) {
      std::uint8_t* p = half.px(x, y);
      p[0] = p[1] = p[2] = 255;
    }
  CHECK(mean_luma(half) == Catch::Approx(127.5));
}

TEST_CASE("bilinear sampling at integer coordinates is exact", "[image]") {
  Frame f = testutil::make_detail_texture(32, 32, 5);
  std::uint8_t rgb[3];
  REQUIRE(sample_bilinear(f, 10.0, 20.0, rgb));
  CHECK(rgb[0] == f.px(10, 20)[0]);
  CHECK(!sample_bilinear(f, -0.001, 0.0, rgb));
  CHECK(!sample_bilinear(f, 31.001, 0.0, rgb));
}

TEST_CASE("png round trip", "[image]") {
  testutil::TempDir dir("png");
  Frame f = testutil::make_detail_texture(40, 24, 11);
  write_png(dir.path() / "a.png", f);
  Frame g = read_png(dir.path() / "a.png");
  REQUIRE(g.width == f.width);
  REQUIRE(g.height == f.height);
  CHECK(g.pixels == f.pixels);
}

TEST_CASE("frame dir with a single frame", "[image]") {
  testutil::TempDir dir("fdir1");
  FrameSequence seq;
  seq.frame_rate = {30, 1};
  seq.source_id = "solo";
  seq.frames.push_back(make_frame(8, 8, 1, 2, 3));
  write_frame_dir(dir.path() / "clip", seq);
  FrameSequence back = read_frame_dir(dir.path() / "clip");
  REQUIRE(back.frames.size() == 1);
  CHECK(back.frame_rate == Fraction{30, 1});
  CHECK(back.source_id == "solo");
  CHECK(back.frames[0].pixels == seq.frames[0].pixels);
}

TEST_CASE("frame dir rejects gaps", "[image]") {
  testutil::TempDir dir("fdirgap");
  FrameSequence seq;
  seq.frame_rate = {25, 1};
  seq.source_id = "gap";
  for (int i = 0; i < 3; ++i) {
    Frame f = make_frame(8, 8);
    f.index = i;
    seq.frames.push_back(std::move(f));
  }
  write_frame_dir(dir.path() / "clip", seq);
  std::filesystem::remove(dir.path() / "clip" / "frame_000001.png");
  CHECK_THROWS_WITH(read_frame_dir(dir.path() / "clip"),
                    Catch::Matchers::ContainsSubstring("nonconsecutive"));
}

TEST_CASE("frame dir requires meta.json", "[image]") {
  testutil::TempDir dir("fdirmeta");
  std::filesystem::create_directories(dir.path() / "clip");
  write_png(dir.path() / "clip" / "frame_000000.png", make_frame(4, 4));
  CHECK_THROWS_WITH(read_frame_dir(dir.path() / "clip"),
                    Catch::Matchers::ContainsSubstring("meta.json"));
}

TEST_CASE("frame dir of uniform frames reads back pixel-wise", "[image]") {
  testutil::TempDir dir("fdir10");
  FrameSequence seq;
  seq.frame_rate = {24, 1};
  seq.source_id = "uniform";
  for (int i = 0; i < 10; ++i) {
    Frame f = make_frame(16, 9, 90, 120, 200);
    f.index = i;
    seq.frames.push_back(std::move(f));
  }
  write_frame_dir(dir.path() / "clip", seq);
  FrameSequence back = read_frame_dir(dir.path() / "clip");
  REQUIRE(back.frames.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(back.frames[static_cast<std::size_t>(i)].index == i);
    CHECK(back.frames[static_cast<std::size_t>(i)].pixels ==
          seq.frames[static_cast<std::size_t>(i)].pixels);
  }
}

TEST_CASE("frame dir rejects mixed dimensions", "[image]") {
  testutil::TempDir dir("fdirmix");
  std::filesystem::create_directories(dir.path() / "clip");
  {
    std::ofstream meta(dir.path() / "clip" / "meta.json");
    meta << R"({"fps_num":25,"fps_den":1,"source_id":"mix"})";
  }
  write_png(dir.path() / "clip" / "frame_000000.png", make_frame(8, 8));
  write_png(dir.path() / "clip" / "frame_000001.png", make_frame(9, 8));
  CHECK_THROWS_WITH(read_frame_dir(dir.path() / "clip"),
                    Catch::Matchers::ContainsSubstring("mixed"));
}
