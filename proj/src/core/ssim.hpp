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

#include "core/image.hpp"

namespace vtb {

inline constexpr int kSsimWindow = 8;
inline constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
inline constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

// Mean SSIM over every 8x8 window (stride 1, uniform weights, population
// statistics). Images narrower or shorter than 8 use a window clipped to the
// image size. Throws ArgumentError on a shape mismatch or empty input.
double compute_ssim(const GrayImage& a, const GrayImage& b);

// Mean absolute pixel difference in [0, 255].
double mean_abs_diff(const GrayImage& a, const GrayImage& b);

}  // namespace vtb
