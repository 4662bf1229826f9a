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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "core/image.hpp"

namespace vtb {

struct SyntheticVideo;

struct AudioInfo {
  std::filesystem::path path;  // empty when the video has no audio track
  double duration_s = 0.0;
  bool has_audio = false;
};

// Media decoding lives outside this project: real videos go through OpenCV's
// video reader and an external ffmpeg process for audio; ".svid.json"
// fixtures are rendered in-process.
class MediaToolkit {
 public:
  virtual ~MediaToolkit() = default;
  virtual double probe_duration(const std::filesystem::path& video) = 0;
  // Writes 16 kHz mono PCM WAV to `out`. Throws StageError with diagnostics on
  // toolkit failure; a missing audio track is reported via has_audio=false.
  virtual AudioInfo extract_audio(const std::filesystem::path& video,
                                  const std::filesystem::path& out) = 0;
  // Throws IoError on decode failure.
  virtual GrayImage frame_at(const std::filesystem::path& video, double t) = 0;
  // Human-readable availability check for `doctor`; empty when healthy.
  virtual std::string diagnose() = 0;
};

class SyntheticMedia final : public MediaToolkit {
 public:
  double probe_duration(const std::filesystem::path& video) override;
  AudioInfo extract_audio(const std::filesystem::path& video,
                          const std::filesystem::path& out) override;
  GrayImage frame_at(const std::filesystem::path& video, double t) override;
  std::string diagnose() override { return {}; }

 private:
  std::shared_ptr<const SyntheticVideo> load(const std::filesystem::path& video);
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const SyntheticVideo>> cache_;
};

class ExternalMedia final : public MediaToolkit {
 public:
  explicit ExternalMedia(std::string ffmpeg = "ffmpeg") : ffmpeg_(std::move(ffmpeg)) {}
  double probe_duration(const std::filesystem::path& video) override;
  AudioInfo extract_audio(const std::filesystem::path& video,
                          const std::filesystem::path& out) override;
  GrayImage frame_at(const std::filesystem::path& video, double t) override;
  std::string diagnose() override;

 private:
  std::string ffmpeg_;
  std::mutex mu_;
};

// Dispatches on file type.
class CompositeMedia final : public MediaToolkit {
 public:
  explicit CompositeMedia(std::string ffmpeg = "ffmpeg") : external_(std::move(ffmpeg)) {}
  double probe_duration(const std::filesystem::path& video) override;
  AudioInfo extract_audio(const std::filesystem::path& video,
                          const std::filesystem::path& out) override;
  GrayImage frame_at(const std::filesystem::path& video, double t) override;
  std::string diagnose() override { return external_.diagnose(); }

 private:
  MediaToolkit& pick(const std::filesystem::path& video);
  SyntheticMedia synthetic_;
  ExternalMedia external_;
};

}  // namespace vtb
