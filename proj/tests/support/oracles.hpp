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

#pragma once

// Straightforward reference implementations used as test oracles. They favour
// obviousness over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "core/image.hpp"

namespace vtb::oracle {

// Mean SSIM over every 8x8 window (stride 1), population statistics, window
// clipped to the image when a side is shorter than 8.
inline double ssim(const GrayImage& a, const GrayImage& b) {
  const double c1 = (0.01 * 255) * (0.01 * 255);
  const double c2 = (0.03 * 255) * (0.03 * 255);
  const int ww = std::min(8, a.width);
  const int wh = std::min(8, a.height);
  const double n = static_cast<double>(ww) * wh;
  double total = 0.0;
  int windows = 0;
  for (int y0 = 0; y0 + wh <= a.height; ++y0) {
    for (int x0 = 0; x0 + ww <= a.width; ++x0) {
      double ma = 0, mb = 0;
      for (int y = y0; y < y0 + wh; ++y)
        for (int x = x0; x < x0 + ww; ++x) {
          ma += a.at(x, y);
          mb += b.at(x, y);
        }
      ma /= n;
      mb /= n;
      double va = 0, vb = 0, cov = 0;
      for (int y = y0; y < y0 + wh; ++y)
        for (int x = x0; x < x0 + ww; ++x) {
          const double da = a.at(x, y) - ma;
          const double db = b.at(x, y) - mb;
          va += da * da;
          vb += db * db;
          cov += da * db;
        }
      va /= n;
      vb /= n;
      cov /= n;
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++windows;
    }
  }
  return total / windows;
}

// Reference-chain keyframe selection: the first frame is a keyframe; each
// later frame becomes one when it differs enough from the latest keyframe.
template <typename Changed>
std::vector<std::size_t> select(std::size_t n, Changed changed) {
  std::vector<std::size_t> keys;
  if (n == 0) return keys;
  keys.push_back(0);
  std::size_t ref = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (changed(ref, i)) {
      keys.push_back(i);
      ref = i;
    }
  }
  return keys;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

// Average over unordered image pairs of (cosine + SSIM) / 2. Images of
// identical shape only.
inline double insi_sim(const std::vector<GrayImage>& images,
                       const std::vector<std::vector<double>>& embeddings) {
  double sum = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      sum += (cosine(embeddings[i], embeddings[j]) + ssim(images[i], images[j])) / 2.0;
      ++pairs;
    }
  return sum / pairs;
}

}  // namespace vtb::oracle
