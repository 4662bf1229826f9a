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

#include "core/synthetic_video.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <opencv2/imgproc.hpp>

#include "core/error.hpp"

namespace vtb {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFormat = "vtb-synthetic-video/1";

// Uniform integer in [lo, hi] from raw engine output; engine output is
// specified by the standard, distributions are not.
int draw(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

const SyntheticScene* scene_at(const std::vector<SyntheticScene>& scenes, double t) {
  const SyntheticScene* best = nullptr;
  for (const auto& s : scenes) {
    if (t >= s.start_s && t < s.end_s) return &s;
    if (t >= s.start_s) best = &s;
  }
  return best ? best : (scenes.empty() ? nullptr : &scenes.front());
}

void draw_text_lines(cv::Mat& m, const SyntheticScene& s, int visible, int ink) {
  std::mt19937_64 layout(s.seed * 7919 + 17);
  const int left = 6;
  const int right = m.cols / 2 + 8;
  for (int i = 0; i < s.lines; ++i) {
    const int y = 24 + i * 9;
    int x = left;
    // Widths are drawn for every line so visible lines do not depend on how
    // many are revealed.
    std::vector<int> widths;
    while (x < right) {
      int w = draw(layout, 5, 16);
      widths.push_back(w);
      x += w + 3;
    }
    if (i >= visible || y + 6 >= m.rows) continue;
    x = left;
    for (int w : widths) {
      cv::rectangle(m, cv::Rect(x, y, std::min(w, right - x), 6), cv::Scalar(ink), cv::FILLED,
                    cv::LINE_8);
      x += w + 3;
    }
  }
}

void draw_diagram(cv::Mat& m, const SyntheticScene& s, int ink, double progress) {
  const int cx = m.cols * 3 / 4;
  const int cy = m.rows / 2 + 8;
  if (s.diagram == "triangle") {
    std::vector<cv::Point> pts = {{cx - 22, cy + 20}, {cx + 22, cy + 20}, {cx - 10, cy - 22}};
    cv::polylines(m, pts, true, cv::Scalar(ink), 2, cv::LINE_8);
    if (progress >= 0.5) cv::line(m, pts[2], {cx - 10, cy + 20}, cv::Scalar(ink), 1, cv::LINE_8);
  } else if (s.diagram == "circle") {
    cv::circle(m, {cx, cy}, 20, cv::Scalar(ink), 2, cv::LINE_8);
    if (progress >= 0.5) cv::line(m, {cx, cy}, {cx + 20, cy}, cv::Scalar(ink), 2, cv::LINE_8);
  } else if (s.diagram == "bars") {
    std::mt19937_64 layout(s.seed * 104729 + 3);
    for (int i = 0; i < 5; ++i) {
      int h = draw(layout, 8, 36);
      cv::rectangle(m, cv::Rect(cx - 25 + i * 10, cy + 20 - h, 7, h), cv::Scalar(ink),
                    cv::FILLED, cv::LINE_8);
    }
  }
}

}  // namespace

GrayImage SyntheticVideo::render(double t) const {
  cv::Mat m(height, width, CV_8UC1, cv::Scalar(0));
  const SyntheticScene* s = scene_at(scenes, t);
  double progress = 0.0;
  if (s) {
    const double len = std::max(1e-9, s->end_s - s->start_s);
    progress = std::clamp((t - s->start_s) / len, 0.0, 0.999999);
  }
  const std::string kind = s ? s->kind : "slide";

  if (kind == "speaker") {
    m.setTo(cv::Scalar(96));
    cv::rectangle(m, cv::Rect(0, height * 2 / 3, width, height / 3), cv::Scalar(70), cv::FILLED);
    cv::ellipse(m, {width / 2, height / 2 - 4}, {16, 20}, 0, 0, 360, cv::Scalar(190), cv::FILLED,
                cv::LINE_8);
    cv::rectangle(m, cv::Rect(width / 2 - 26, height / 2 + 16, 52, height / 2), cv::Scalar(50),
                  cv::FILLED);
    // Mouth opens and closes with speech.
    const int open = static_cast<int>(std::lround(t * 3.0)) % 2;
    cv::rectangle(m, cv::Rect(width / 2 - 5, height / 2 + 4, 10, 1 + open), cv::Scalar(60),
                  cv::FILLED);
  } else {
    const bool board = kind == "blackboard";
    const int bg = board ? 32 : 236;
    const int ink = board ? 220 : 24;
    m.setTo(cv::Scalar(bg));
    cv::rectangle(m, cv::Rect(4, 8, width - 8, 9), cv::Scalar(board ? 160 : 60), cv::FILLED);
    const int steps = std::max(1, s ? s->reveal : 1);
    const int phase = std::min(steps - 1, static_cast<int>(progress * steps));
    const int lines = s ? s->lines : 0;
    const int visible = (lines * (phase + 1) + steps - 1) / steps;
    if (s) {
      draw_text_lines(m, *s, visible, ink);
      draw_diagram(m, *s, ink, static_cast<double>(phase + 1) / steps);
    }
  }

  GrayImage img(width, height);
  for (int y = 0; y < height; ++y) {
    const auto* row = m.ptr<std::uint8_t>(y);
    std::copy(row, row + width, img.pixels.begin() + static_cast<std::ptrdiff_t>(y) * width);
  }

  if (s && (s->noise > 0 || s->flicker > 0)) {
    const auto frame_key = static_cast<std::uint64_t>(std::llround(t * 1000.0));
    std::mt19937_64 rng(s->seed * 1000003ull + frame_key);
    const int shift = s->flicker > 0 ? draw(rng, -s->flicker, s->flicker) : 0;
    for (auto& p : img.pixels) {
      int v = p + shift + (s->noise > 0 ? draw(rng, -s->noise, s->noise) : 0);
      p = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  if (s && s->code != 0) burn_fixture_code(img, s->code);
  return img;
}

std::vector<std::int16_t> SyntheticVideo::audio_samples() const {
  const auto n = static_cast<std::size_t>(std::llround(duration_s * kAudioSampleRate));
  std::vector<std::int16_t> out(n, 0);
  for (const auto& [a, b] : voiced) {
    auto lo = static_cast<std::size_t>(std::max(0.0, a) * kAudioSampleRate);
    auto hi = std::min(n, static_cast<std::size_t>(std::max(0.0, b) * kAudioSampleRate));
    for (std::size_t i = lo; i < hi; ++i) {
      const double phase = 2.0 * std::numbers::pi * 220.0 * static_cast<double>(i) / kAudioSampleRate;
      out[i] = static_cast<std::int16_t>(std::lround(6000.0 * std::sin(phase)));
    }
  }
  return out;
}

bool is_synthetic_video(const fs::path& p) {
  const auto name = p.filename().string();
  const std::string suffix = kSyntheticSuffix;
  return name.size() > suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json synthetic_video_to_json(const SyntheticVideo& v) {
  json scenes = json::array();
  for (const auto& s : v.scenes) {
    scenes.push_back(json{{"start_s", s.start_s}, {"end_s", s.end_s}, {"kind", s.kind},
                          {"code", s.code},       {"seed", s.seed},   {"lines", s.lines},
                          {"reveal", s.reveal},   {"noise", s.noise}, {"flicker", s.flicker},
                          {"diagram", s.diagram}});
  }
  json voiced = json::array();
  for (const auto& [a, b] : v.voiced) voiced.push_back(json::array({a, b}));
  return json{{"format", kFormat},
              {"width", v.width},
              {"height", v.height},
              {"duration_s", v.duration_s},
              {"audio", {{"present", v.has_audio}, {"voiced", voiced}}},
              {"scenes", scenes}};
}

SyntheticVideo synthetic_video_from_json(const json& j) {
  if (j.value("format", "") != kFormat)
    throw ValidationError(std::string("synthetic video: expected format ") + kFormat);
  SyntheticVideo v;
  v.width = static_cast<int>(require_int(j, "width"));
  v.height = static_cast<int>(require_int(j, "height"));
  v.duration_s = require_number(j, "duration_s");
  if (v.width < 16 || v.height < 16 || v.duration_s < 0)
    throw ValidationError("synthetic video: bad dimensions or duration");
  if (auto it = j.find("audio"); it != j.end()) {
    v.has_audio = it->value("present", true);
    for (const auto& pair : it->value("voiced", json::array()))
      v.voiced.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  for (const auto& js : require(j, "scenes")) {
    SyntheticScene s;
    s.start_s = require_number(js, "start_s");
    s.end_s = require_number(js, "end_s");
    s.kind = js.value("kind", "slide");
    s.code = js.value("code", std::uint16_t{0});
    s.seed = js.value("seed", std::uint64_t{1});
    s.lines = js.value("lines", 4);
    s.reveal = js.value("reveal", 1);
    s.noise = js.value("noise", 0);
    s.flicker = js.value("flicker", 0);
    s.diagram = js.value("diagram", "none");
    v.scenes.push_back(s);
  }
  return v;
}

SyntheticVideo load_synthetic_video(const fs::path& p) {
  try {
    return synthetic_video_from_json(read_json_file(p));
  } catch (const json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void put_u16(std::ofstream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

}  // namespace

void write_wav(const fs::path& path, const std::vector<std::int16_t>& samples, int sample_rate) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    out.write("RIFF", 4);
    put_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<std::uint32_t>(sample_rate));
    put_u32(out, static_cast<std::uint32_t>(sample_rate * 2));
    put_u16(out, 2);
    put_u16(out, 16);
    out.write("data", 4);
    put_u32(out, data_bytes);
    for (auto s : samples) put_u16(out, static_cast<std::uint16_t>(s));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

double wav_duration(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  char hdr[12];
  if (!in.read(hdr, 12) || std::string_view(hdr, 4) != "RIFF" || std::string_view(hdr + 8, 4) != "WAVE")
    throw IoError("not a RIFF/WAVE file: " + path.string());
  std::uint32_t rate = 0;
  std::uint16_t channels = 0, bits = 0;
  while (in) {
    char id[4];
    unsigned char sz[4];
    if (!in.read(id, 4) || !in.read(reinterpret_cast<char*>(sz), 4)) break;
    const std::uint32_t size = sz[0] | (sz[1] << 8) | (sz[2] << 16) | (static_cast<std::uint32_t>(sz[3]) << 24);
    if (std::string_view(id, 4) == "fmt ") {
      unsigned char f[16];
      if (size < 16 || !in.read(reinterpret_cast<char*>(f), 16)) break;
      channels = static_cast<std::uint16_t>(f[2] | (f[3] << 8));
      rate = f[4] | (f[5] << 8) | (f[6] << 16) | (static_cast<std::uint32_t>(f[7]) << 24);
      bits = static_cast<std::uint16_t>(f[14] | (f[15] << 8));
      in.seekg(size - 16, std::ios::cur);
    } else if (std::string_view(id, 4) == "data") {
      if (rate == 0 || channels == 0 || bits == 0) break;
      return static_cast<double>(size) / (rate * channels * (bits / 8.0));
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw IoError("malformed WAV file: " + path.string());
}

}  // namespace vtb
