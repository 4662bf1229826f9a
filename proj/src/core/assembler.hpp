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
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/corpus_model.hpp"

namespace vtb {

struct ClipWithFrames {
  VideoClip clip;
  std::vector<Keyframe> keyframes;  // kept keyframes, time-ordered
};

struct VideoFrames {
  std::string video_id;
  std::vector<ClipWithFrames> clips;
};

// Kept clip: [frames..., ocr (kept OCR texts joined), asr]. Dropped-visual
// clip: [asr]. Throws StageError for a clip still pending.
std::vector<InterleavedElement> interleave_video(const VideoFrames& video, bool use_ocr = true);

struct VideoElements {
  std::string video_id;
  std::vector<InterleavedElement> elements;
};

// Atomic packing unit: a run starting at an image and holding every element
// up to the next image that follows text. Leading text joins the first
// fragment; text after the last image joins the last one.
struct Fragment {
  std::string video_id;
  std::vector<InterleavedElement> elements;
  std::size_t tokens = 0;
  std::size_t images = 0;
};

// Empty when the video has no image.
std::vector<Fragment> make_fragments(const VideoElements& video, const Tokenizer& tok);

struct PackOptions {
  PackingStrategy strategy = PackingStrategy::concat;
  std::size_t token_budget = 4096;
  std::size_t max_images = 32;
  std::string eov_token = kDefaultEovToken;
  std::string id_prefix = "sample";
  const Tokenizer* tokenizer = nullptr;
};

struct Exclusion {
  std::string video_id;
  std::string reason;
};

struct PackResult {
  std::vector<InterleavedSample> samples;
  std::vector<Exclusion> excluded;  // videos that produced no sample
};

// per_video: one sample per video, no budgets. split_video: greedy split of
// each video at fragment boundaries. concat: greedy fill across videos in
// input order, an end_of_video element (1 token) after each video's last
// fragment. A fragment that alone breaks a budget is emitted by itself and
// flagged oversized.
PackResult pack(const std::vector<VideoElements>& videos, const PackOptions& opts);

struct CountStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double avg = 0.0;  // rounded to one decimal
};

struct CorpusStats {
  std::size_t n_samples = 0;
  CountStats images;
  CountStats tokens;
};

CorpusStats compute_stats(const std::vector<InterleavedSample>& samples);
json stats_to_json(const CorpusStats& s);

// Writes the corpus atomically; a failed write leaves no partial file.
void emit(const std::vector<InterleavedSample>& samples, const std::filesystem::path& out,
          const SampleRules& rules);

}  // namespace vtb
