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

#include "core/ssim.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "core/error.hpp"

namespace vtb {

namespace {

void check_pair(const GrayImage& a, const GrayImage& b, const char* fn) {
  if (a.empty() || b.empty()) throw ArgumentError(std::string(fn) + ": empty image");
  if (!a.same_shape(b))
    throw ArgumentError(std::string(fn) + ": dimension mismatch " + std::to_string(a.width) + "x" +
                        std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                        std::to_string(b.height));
}

// (w+1) x (h+1) summed-area table.
class Integral {
 public:
  Integral(int w, int h) : w_(w), t_(static_cast<std::size_t>(w + 1) * (h + 1), 0) {}

  template <typename F>
  void fill(int w, int h, F value) {
    for (int y = 0; y < h; ++y) {
      std::int64_t row = 0;
      for (int x = 0; x < w; ++x) {
        row += value(x, y);
        at(x + 1, y + 1) = at(x + 1, y) + row;
      }
    }
  }

  std::int64_t box(int x, int y, int bw, int bh) const {
    return at(x + bw, y + bh) - at(x, y + bh) - at(x + bw, y) + at(x, y);
  }

 private:
  std::int64_t& at(int x, int y) { return t_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
  std::int64_t at(int x, int y) const { return t_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
  int w_;
  std::vector<std::int64_t> t_;
};

}  // namespace

double compute_ssim(const GrayImage& a, const GrayImage& b) {
  check_pair(a, b, "compute_ssim");
  const int w = a.width, h = a.height;
  const int ww = std::min(kSsimWindow, w), wh = std::min(kSsimWindow, h);

  Integral sa(w, h), sb(w, h), saa(w, h), sbb(w, h), sab(w, h);
  sa.fill(w, h, [&](int x, int y) { return std::int64_t{a.at(x, y)}; });
  sb.fill(w, h, [&](int x, int y) { return std::int64_t{b.at(x, y)}; });
  saa.fill(w, h, [&](int x, int y) { return std::int64_t{a.at(x, y)} * a.at(x, y); });
  sbb.fill(w, h, [&](int x, int y) { return std::int64_t{b.at(x, y)} * b.at(x, y); });
  sab.fill(w, h, [&](int x, int y) { return std::int64_t{a.at(x, y)} * b.at(x, y); });

  const std::int64_t n = static_cast<std::int64_t>(ww) * wh;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  double total = 0.0;
  std::size_t windows = 0;
  for (int y = 0; y + wh <= h; ++y) {
    for (int x = 0; x + ww <= w; ++x) {
      const std::int64_t s_a = sa.box(x, y, ww, wh), s_b = sb.box(x, y, ww, wh);
      // Exact integer numerators: n*sum(x^2) - sum(x)^2 etc.
      const double var_a = static_cast<double>(n * saa.box(x, y, ww, wh) - s_a * s_a) / n2;
      const double var_b = static_cast<double>(n * sbb.box(x, y, ww, wh) - s_b * s_b) / n2;
      const double cov = static_cast<double>(n * sab.box(x, y, ww, wh) - s_a * s_b) / n2;
      const double mu_a = static_cast<double>(s_a) / static_cast<double>(n);
      const double mu_b = static_cast<double>(s_b) / static_cast<double>(n);
      total += ((2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2)) /
               ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

double mean_abs_diff(const GrayImage& a, const GrayImage& b) {
  check_pair(a, b, "mean_abs_diff");
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i)
    sum += static_cast<std::uint64_t>(std::abs(int{a.pixels[i]} - int{b.pixels[i]}));
  return static_cast<double>(sum) / static_cast<double>(a.pixels.size());
}

}  // namespace vtb
