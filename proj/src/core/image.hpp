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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vtb {

// 8-bit grayscale raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool same_shape(const GrayImage& o) const { return width == o.width && height == o.height; }
  bool empty() const { return pixels.empty(); }
  bool operator==(const GrayImage&) const = default;
};

// Loads any format the image codec understands; color input is converted
// with ITU-R BT.601 luma weights.
GrayImage load_gray(const std::filesystem::path& path);
void save_png(const GrayImage& img, const std::filesystem::path& path);
GrayImage resize_area(const GrayImage& img, int width, int height);

// Hash of dimensions and pixel values; stable across encoders.
std::string pixel_hash(const GrayImage& img);

// Fixture marker: a 20-block strip of 4x4 cells along the top-left edge
// (4 marker bits, 12-bit id, 4-bit check). Synthetic fixtures burn an id
// there so mock OCR/caption services can recognise the scene.
inline constexpr int kCodeCell = 4;
inline constexpr int kCodeBlocks = 20;
inline constexpr std::uint16_t kMaxFixtureCode = 0x0fff;

void burn_fixture_code(GrayImage& img, std::uint16_t code);
std::optional<std::uint16_t> read_fixture_code(const GrayImage& img);

}  // namespace vtb
