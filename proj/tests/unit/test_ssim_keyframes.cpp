// Copyright 2026 The vtb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "core/keyframes.hpp"
#include "core/mock_services.hpp"
#include "core/ssim.hpp"
#include "support/oracles.hpp"

using namespace vtb;

namespace {

GrayImage random_image(std::mt19937_64& rng, int w, int h) {
  GrayImage img(w, h);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() % 256);
  return img;
}

// Perturbs a block of pixels so consecutive frames are related but not equal.
GrayImage perturb(const GrayImage& base, std::mt19937_64& rng, int amount) {
  GrayImage out = base;
  const int x0 = static_cast<int>(rng() % base.width);
  const int y0 = static_cast<int>(rng() % base.height);
  for (int y = y0; y < std::min(base.height, y0 + amount); ++y)
    for (int x = x0; x < std::min(base.width, x0 + amount); ++x)
      out.at(x, y) = static_cast<std::uint8_t>(rng() % 256);
  return out;
}

}  // namespace

TEST_CASE("ssim matches the brute-force window average") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    auto a = random_image(rng, 32, 32);
    auto b = i % 2 ? perturb(a, rng, 12) : random_image(rng, 32, 32);
    CHECK(std::abs(compute_ssim(a, b) - oracle::ssim(a, b)) < 1e-9);
  }
}

TEST_CASE("ssim of black against white is C1/(255^2+C1)") {
  GrayImage black(32, 32, 0), white(32, 32, 255);
  const double expected = kSsimC1 / (255.0 * 255.0 + kSsimC1);
  CHECK(std::abs(compute_ssim(black, white) - expected) < 1e-6);
  CHECK(std::abs(compute_ssim(white, black) - expected) < 1e-6);
}

TEST_CASE("ssim of an image with itself is one") {
  std::mt19937_64 rng(3);
  auto a = random_image(rng, 40, 24);
  CHECK(compute_ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ssim clips the window on small images") {
  std::mt19937_64 rng(5);
  auto a = random_image(rng, 5, 12);
  auto b = random_image(rng, 5, 12);
  CHECK(std::abs(compute_ssim(a, b) - oracle::ssim(a, b)) < 1e-9);
}

TEST_CASE("ssim rejects mismatched shapes") {
  CHECK_THROWS(compute_ssim(GrayImage(8, 8), GrayImage(9, 8)));
}

TEST_CASE("mean absolute difference") {
  GrayImage a(4, 4, 10), b(4, 4, 13);
  CHECK(mean_abs_diff(a, b) == doctest::Approx(3.0));
  b.at(0, 0) = 26;
  CHECK(mean_abs_diff(a, b) == doctest::Approx((15 * 3 + 16) / 16.0));
}

TEST_CASE("sample_times covers the span at the sampling rate") {
  auto t = sample_times(10.0, 13.0, 1.0);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(10.0));
  CHECK(t[2] == doctest::Approx(12.0));
  CHECK(sample_times(0.0, 0.2, 1.0).size() == 1);
  CHECK(sample_times(0.0, 2.0, 2.0).size() == 4);
}

TEST_CASE("keyframes_ssim follows the reference chain") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<GrayImage> frames{random_image(rng, 32, 32)};
    const std::size_t n = 1 + rng() % 20;
    while (frames.size() < n) {
      const int roll = static_cast<int>(rng() % 3);
      frames.push_back(roll == 0 ? frames.back() : perturb(frames.back(), rng, roll == 1 ? 6 : 20));
    }
    const double T = 0.5 + static_cast<double>(rng() % 50) / 100.0;
    auto expected = oracle::select(frames.size(), [&](std::size_t r, std::size_t i) {
      return oracle::ssim(frames[r], frames[i]) < T;
    });
    CHECK(keyframes_ssim(frames, T) == expected);
  }
}

TEST_CASE("the first frame is always a keyframe and identical frames add none") {
  std::vector<GrayImage> frames(6, GrayImage(16, 16, 100));
  CHECK(keyframes_ssim(frames, 0.99) == std::vector<std::size_t>{0});
  CHECK(keyframes_pixel(frames, 0.5) == std::vector<std::size_t>{0});
  CHECK(keyframes_ssim({}, 0.5).empty());
}

TEST_CASE("carried reference suppresses an unchanged first frame") {
  std::vector<GrayImage> frames(3, GrayImage(16, 16, 100));
  GrayImage same(16, 16, 100);
  CHECK(keyframes_ssim(frames, 0.9, &same).empty());
  GrayImage different(16, 16, 0);
  different.at(3, 3) = 255;
  CHECK(keyframes_ssim(frames, 0.9, &different) == std::vector<std::size_t>{0});
}

TEST_CASE("pixel and semantic extractors use their own change tests") {
  std::vector<GrayImage> frames{GrayImage(8, 8, 0), GrayImage(8, 8, 4), GrayImage(8, 8, 9),
                                GrayImage(8, 8, 12)};
  // Differences to the running reference: 4 (no), 9 (yes), then 3 from 9 (no).
  CHECK(keyframes_pixel(frames, 5.0) == std::vector<std::size_t>{0, 2});

  std::vector<EmbeddingVector> e{normalized({1, 0}), normalized({1, 0.1}), normalized({0, 1}),
                                 normalized({0.1, 1})};
  CHECK(keyframes_semantic(e, 0.95) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("select_keyframes is the literal chain") {
  std::vector<int> values{0, 1, 5, 6, 6, 12, 13};
  auto changed = [&](std::size_t r, std::size_t i) { return values[i] - values[r] > 3; };
  CHECK(select_keyframes(values.size(), changed) == oracle::select(values.size(), changed));
  CHECK(select_keyframes(values.size(), changed) == std::vector<std::size_t>{0, 2, 5});
}

TEST_CASE("mock image embedding is unit length, layout sensitive and brightness tolerant") {
  GrayImage a(32, 32, 50);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 32; ++x) a.at(x, y) = 200;
  GrayImage b(32, 32, 50);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 16; ++x) b.at(x, y) = 200;
  auto ea = MockServices::embed_image(a);
  auto eb = MockServices::embed_image(b);
  CHECK(cosine(ea, ea) == doctest::Approx(1.0));
  CHECK(cosine(ea, eb) < 0.8);
  GrayImage brighter = a;
  for (auto& px : brighter.pixels) px = static_cast<std::uint8_t>(px + 6);
  CHECK(cosine(ea, MockServices::embed_image(brighter)) > 0.99);
}
