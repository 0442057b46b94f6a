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

#include "restyle/features.hpp"
#include "testutil.hpp"

using namespace restyle;

namespace {

GrayImage gray(int w, int h, std::uint8_t v) {
  GrayImage g;
  g.width = w;
  g.height = h;
  g.data.assign(static_cast<std::size_t>(w) * h, v);
  return g;
}

// Independent segment-test oracle: checks all 16 arc start positions for a
// run of >= 9 ring pixels uniformly brighter or darker than the center.
bool oracle_is_corner(const GrayImage& img, int x, int y, int t) {
  static const int dx[16] = {0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3, -3, -3, -2, -1};
  static const int dy[16] = {-3, -3, -2, -1, 0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3};
  int c = img.at(x, y);
  for (int start = 0; start < 16; ++start) {
    bool bright = true, dark = true;
    for (int k = 0; k < 9; ++k) {
      int v = img.at(x + dx[(start + k) % 16], y + dy[(start + k) % 16]);
      if (v <= c + t) bright = false;
      if (v >= c - t) dark = false;
      if (!bright && !dark) break;
    }
    if (bright || dark) return true;
  }
  return false;
}

GrayImage bright_square_image() {
  GrayImage g = gray(20, 20, 10);
  for (int y = 6; y <= 13; ++y)
    for (int x = 6; x <= 13; ++x)
      g.data[static_cast<std::size_t>(y) * 20 + x] = 210;
  return g;
}

GrayImage gray_of_frame(const Frame& f) { return luma(f); }

}  // namespace

TEST_CASE("fast finds nothing on a uniform image", "[features]") {
  CHECK(fast_detect(gray(32, 32, 128), 20, 100).empty());
}

TEST_CASE("fast finds the corners of a bright square", "[features]") {
  GrayImage img = bright_square_image();
  std::vector<Keypoint> kps = fast_detect(img, 40, 100);
  REQUIRE_FALSE(kps.empty());
  // Every detection passes the independent segment test.
  for (const Keypoint& kp : kps)
    CHECK(oracle_is_corner(img, static_cast<int>(kp.x),
                           static_cast<int>(kp.y), 40));
  // All four square corners appear among the detections.
  for (auto [cx, cy] : {std::pair{6, 6}, {6, 13}, {13, 6}, {13, 13}}) {
    bool found = false;
    for (const Keypoint& kp : kps)
      if (kp.x == cx && kp.y == cy) found = true;
    CHECK(found);
  }
}

TEST_CASE("fast detections are a subset of the oracle's corners",
          "[features]") {
  Frame tex = testutil::make_detail_texture(64, 64, 31);
  GrayImage img = gray_of_frame(tex);
  for (const Keypoint& kp : fast_detect(img, 20, 1000))
    CHECK(oracle_is_corner(img, static_cast<int>(kp.x),
                           static_cast<int>(kp.y), 20));
}

TEST_CASE("threshold above full range yields nothing", "[features]") {
  GrayImage img = bright_square_image();
  CHECK(fast_detect(img, 255, 100).empty());
}

TEST_CASE("max_points caps the detection count by score", "[features]") {
  Frame tex = testutil::make_detail_texture(96, 96, 77);
  GrayImage img = gray_of_frame(tex);
  std::vector<Keypoint> all = fast_detect(img, 15, 10000);
  std::vector<Keypoint> top = fast_detect(img, 15, 5);
  REQUIRE(all.size() > 5);
  REQUIRE(top.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(top[i].x == all[i].x);
    CHECK(top[i].y == all[i].y);
  }
}

TEST_CASE("describe is deterministic and drops border points", "[features]") {
  Frame tex = testutil::make_detail_texture(64, 64, 5);
  GrayImage img = gray_of_frame(tex);
  std::vector<Keypoint> pts = {{5.0, 5.0, 0.0, false},   // too close
                               {32.0, 32.0, 0.0, false},
                               {40.0, 25.0, 0.0, false}};
  DescriptorSet a = describe(img, pts);
  DescriptorSet b = describe(img, pts);
  REQUIRE(a.descriptors.size() == 2);
  REQUIRE(a.dropped == std::vector<std::size_t>{0});
  REQUIRE(a.kept == (std::vector<std::size_t>{1, 2}));
  for (std::size_t i = 0; i < a.descriptors.size(); ++i)
    CHECK(a.descriptors[i].hamming(b.descriptors[i]) == 0);
}

TEST_CASE("photometric inversion flips every unequal comparison",
          "[features]") {
  // Pick the first seed whose texture has no tied comparison sums at the
  // probe point, then the inverted image must flip all 256 bits.
  std::vector<Keypoint> pts = {{32.0, 32.0, 0.0, false}};
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    Frame tex = testutil::make_detail_texture(64, 64, seed);
    GrayImage img = gray_of_frame(tex);
    detail::Integral integral(img);
    const detail::BriefPattern& pat = detail::brief_pattern();
    bool has_tie = false;
    for (int k = 0; k < 256 && !has_tie; ++k)
      if (integral.box5(32 + pat.ux[k], 32 + pat.uy[k]) ==
          integral.box5(32 + pat.vx[k], 32 + pat.vy[k]))
        has_tie = true;
    if (has_tie) continue;

    GrayImage inv = img;
    for (std::uint8_t& v : inv.data) v = static_cast<std::uint8_t>(255 - v);
    DescriptorSet da = describe(img, pts);
    DescriptorSet db = describe(inv, pts);
    REQUIRE(da.descriptors.size() == 1);
    CHECK(da.descriptors[0].hamming(db.descriptors[0]) == 256);
    return;
  }
  FAIL("no tie-free seed found");
}

TEST_CASE("matching a set against itself is the identity pairing",
          "[features]") {
  Frame tex = testutil::make_detail_texture(128, 128, 9);
  GrayImage img = gray_of_frame(tex);
  std::vector<Keypoint> kps = fast_detect(img, 20, 200);
  DescriptorSet ds = describe(img, kps);
  REQUIRE(ds.descriptors.size() >= 10);
  MatchSet m = match(ds.descriptors, ds.descriptors, 0.8);
  CHECK(m.pairs.size() == ds.descriptors.size());
  for (const auto& p : m.pairs) {
    CHECK(p.a == p.b);
    CHECK(p.distance == 0);
  }
}

TEST_CASE("matching against an empty set yields nothing", "[features]") {
  Descriptor d;
  std::vector<Descriptor> a{d};
  CHECK(match(a, {}, 0.8).pairs.empty());
  CHECK(match({}, a, 0.8).pairs.empty());
}

TEST_CASE("true pairs survive added distractors", "[features]") {
  std::mt19937 rng(41);
  auto random_descriptor = [&rng] {
    Descriptor d;
    for (auto& w : d.bits)
      w = (static_cast<std::uint64_t>(rng()) << 32) ^ rng();
    return d;
  };
  std::vector<Descriptor> a;
  for (int i = 0; i < 10; ++i) a.push_back(random_descriptor());
  std::vector<Descriptor> b = a;
  for (int i = 0; i < 10; ++i) b.push_back(random_descriptor());

  // Exhaustive-distance oracle: each a[i] is closest to b[i] at distance 0.
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (j != i) REQUIRE(a[i].hamming(b[j]) > 0);

  MatchSet m = match(a, b, 0.8);
  REQUIRE(m.pairs.size() == 10);
  for (const auto& p : m.pairs) {
    CHECK(p.a == p.b);
    CHECK(p.distance == 0);
  }
}

TEST_CASE("matching is one-to-one", "[features]") {
  std::mt19937 rng(43);
  auto random_descriptor = [&rng] {
    Descriptor d;
    for (auto& w : d.bits)
      w = (static_cast<std::uint64_t>(rng()) << 32) ^ rng();
    return d;
  };
  std::vector<Descriptor> a, b;
  for (int i = 0; i < 60; ++i) a.push_back(random_descriptor());
  for (int i = 0; i < 40; ++i) b.push_back(random_descriptor());
  MatchSet m = match(a, b, 0.95);
  std::set<std::size_t> seen_a, seen_b;
  for (const auto& p : m.pairs) {
    CHECK(seen_a.insert(p.a).second);
    CHECK(seen_b.insert(p.b).second);
  }
}

TEST_CASE("lsh path recovers exact duplicates at scale", "[features]") {
  std::mt19937 rng(47);
  auto random_descriptor = [&rng] {
    Descriptor d;
    for (auto& w : d.bits)
      w = (static_cast<std::uint64_t>(rng()) << 32) ^ rng();
    return d;
  };
  std::vector<Descriptor> b;
  for (int i = 0; i < 2500; ++i) b.push_back(random_descriptor());
  std::vector<Descriptor> a(b.begin(), b.begin() + 100);
  MatchSet m = match(a, b, 0.8);
  REQUIRE(m.pairs.size() == 100);
  for (const auto& p : m.pairs) {
    CHECK(p.a == p.b);
    CHECK(p.distance == 0);
  }
}
