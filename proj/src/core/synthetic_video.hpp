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
#include <string>
#include <utility>
#include <vector>

#include "core/image.hpp"
#include "core/json_io.hpp"

namespace vtb {

// A scripted "video": scenes rendered procedurally at any timestamp plus a
// voiced/unvoiced audio track. Stored as JSON with the ".svid.json" suffix and
// used for offline fixtures where a real codec is not available.
struct SyntheticScene {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string kind = "slide";  // slide | speaker | blackboard
  std::uint16_t code = 0;      // burned-in fixture id, 0 for none
  std::uint64_t seed = 1;
  int lines = 4;    // text lines on a slide/blackboard
  int reveal = 1;   // the scene reveals its lines in this many steps
  int noise = 0;    // per-pixel uniform noise amplitude
  int flicker = 0;  // per-frame global brightness jitter amplitude
  std::string diagram = "none";  // none | triangle | circle | bars
};

struct SyntheticVideo {
  int width = 128;
  int height = 96;
  double duration_s = 0.0;
  bool has_audio = true;
  std::vector<std::pair<double, double>> voiced;
  std::vector<SyntheticScene> scenes;

  GrayImage render(double t) const;
  // 16 kHz mono signed 16-bit PCM samples covering duration_s.
  std::vector<std::int16_t> audio_samples() const;
};

inline constexpr const char* kSyntheticSuffix = ".svid.json";
inline constexpr int kAudioSampleRate = 16000;

bool is_synthetic_video(const std::filesystem::path& p);
SyntheticVideo load_synthetic_video(const std::filesystem::path& p);
json synthetic_video_to_json(const SyntheticVideo& v);
SyntheticVideo synthetic_video_from_json(const json& j);

void write_wav(const std::filesystem::path& path, const std::vector<std::int16_t>& samples,
               int sample_rate);
// Returns duration in seconds; throws IoError on a malformed file.
double wav_duration(const std::filesystem::path& path);

}  // namespace vtb
