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

#include "core/image.hpp"

#include <array>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "core/error.hpp"
#include "core/hash.hpp"

namespace vtb {

namespace fs = std::filesystem;

namespace {

cv::Mat as_mat(const GrayImage& img) {
  return cv::Mat(img.height, img.width, CV_8UC1,
                 const_cast<std::uint8_t*>(img.pixels.data()));
}

GrayImage from_mat(const cv::Mat& m) {
  GrayImage out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<std::uint8_t>(y);
    std::copy(row, row + m.cols, out.pixels.begin() + static_cast<std::ptrdiff_t>(y) * m.cols);
  }
  return out;
}

constexpr std::array<int, 4> kMarker = {1, 0, 1, 1};

std::uint16_t check_bits(std::uint16_t code) {
  return static_cast<std::uint16_t>((code ^ (code >> 4) ^ (code >> 8)) & 0xf);
}

}  // namespace

GrayImage load_gray(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("image not found: " + path.string());
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (m.empty()) throw IoError("cannot decode image: " + path.string());
  return from_mat(m);
}

void save_png(const GrayImage& img, const fs::path& path) {
  if (img.empty()) throw ArgumentError("cannot save an empty image");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp.png";
  if (!cv::imwrite(tmp.string(), as_mat(img), {cv::IMWRITE_PNG_COMPRESSION, 6}))
    throw IoError("cannot write image: " + path.string());
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot write image: " + path.string());
}

GrayImage resize_area(const GrayImage& img, int width, int height) {
  if (width <= 0 || height <= 0) throw ArgumentError("resize target must be positive");
  if (img.width == width && img.height == height) return img;
  cv::Mat out;
  cv::resize(as_mat(img), out, cv::Size(width, height), 0, 0, cv::INTER_AREA);
  return from_mat(out);
}

std::string pixel_hash(const GrayImage& img) {
  Sha256 h;
  const std::string dims = std::to_string(img.width) + "x" + std::to_string(img.height) + ":";
  h.update(dims);
  h.update(std::span<const std::uint8_t>(img.pixels));
  return h.hex();
}

void burn_fixture_code(GrayImage& img, std::uint16_t code) {
  if (code > kMaxFixtureCode) throw ArgumentError("fixture code out of range");
  if (img.width < kCodeBlocks * kCodeCell || img.height < kCodeCell)
    throw ArgumentError("image too small for a fixture code");
  std::array<int, kCodeBlocks> bits{};
  for (int i = 0; i < 4; ++i) bits[i] = kMarker[i];
  for (int i = 0; i < 12; ++i) bits[4 + i] = (code >> (11 - i)) & 1;
  const auto chk = check_bits(code);
  for (int i = 0; i < 4; ++i) bits[16 + i] = (chk >> (3 - i)) & 1;
  for (int b = 0; b < kCodeBlocks; ++b)
    for (int y = 0; y < kCodeCell; ++y)
      for (int x = 0; x < kCodeCell; ++x)
        img.at(b * kCodeCell + x, y) = bits[b] ? 255 : 0;
}

std::optional<std::uint16_t> read_fixture_code(const GrayImage& img) {
  if (img.width < kCodeBlocks * kCodeCell || img.height < kCodeCell) return std::nullopt;
  std::array<int, kCodeBlocks> bits{};
  for (int b = 0; b < kCodeBlocks; ++b) {
    int sum = 0;
    for (int y = 0; y < kCodeCell; ++y)
      for (int x = 0; x < kCodeCell; ++x) sum += img.at(b * kCodeCell + x, y);
    const int mean = sum / (kCodeCell * kCodeCell);
    if (mean > 64 && mean < 192) return std::nullopt;  // not a clean cell
    bits[b] = mean >= 128 ? 1 : 0;
  }
  for (int i = 0; i < 4; ++i)
    if (bits[i] != kMarker[i]) return std::nullopt;
  std::uint16_t code = 0;
  for (int i = 0; i < 12; ++i) code = static_cast<std::uint16_t>((code << 1) | bits[4 + i]);
  std::uint16_t chk = 0;
  for (int i = 0; i < 4; ++i) chk = static_cast<std::uint16_t>((chk << 1) | bits[16 + i]);
  if (chk != check_bits(code)) return std::nullopt;
  return code;
}

}  // namespace vtb
