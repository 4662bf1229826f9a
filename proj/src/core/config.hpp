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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/corpus_model.hpp"
#include "core/json_io.hpp"

namespace vtb {

enum class PackingStrategy { per_video, split_video, concat };
enum class KeyframeExtractor { ssim, pixel, semantic };

const char* to_string(PackingStrategy s);
PackingStrategy packing_strategy_from_string(const std::string& s);
const char* to_string(KeyframeExtractor k);
KeyframeExtractor keyframe_extractor_from_string(const std::string& s);

struct PipelineConfig {
  double ssim_threshold_T = 0.85;
  double frame_sample_fps = 1.0;
  double clip_target_s = 15.0;
  double clip_min_s = 10.0;
  double clip_max_s = 20.0;
  int min_asr_tokens = 20;
  double min_duration_s = 10.0;
  double caption_asr_sim_threshold = 0.35;
  int criteria_pass_threshold = 3;
  int keyframe_score_threshold = 3;
  double ocr_dedup_jaccard = 0.8;
  std::size_t token_budget = 4096;
  std::size_t max_images_per_sample = 32;
  std::string eov_token = kDefaultEovToken;
  PackingStrategy packing_strategy = PackingStrategy::concat;
  int top_k_search_results = 50;

  // Ablation knobs.
  KeyframeExtractor keyframe_extractor = KeyframeExtractor::ssim;
  double pixel_threshold = 5.0;      // mean absolute difference, 0..255
  double semantic_threshold = 0.95;  // cosine of image embeddings
  bool use_refined_asr = true;
  bool use_ocr = true;
  // Carry the keyframe reference across clip boundaries within a video.
  bool carry_reference_across_clips = false;
  std::size_t caption_frames = 8;

  // Throws ConfigError naming the offending key.
  void validate() const;
};

void to_json(json& j, const PipelineConfig& c);
// Missing keys keep their defaults; present keys are type- and range-checked.
PipelineConfig pipeline_config_from_json(const json& j);

struct ServicesConfig {
  std::string mode = "mock";  // mock | http
  std::string base_url;       // http mode
  std::string token;          // bearer token, usually from SERVICE_TOKEN
  std::filesystem::path fixtures_dir;
  std::vector<std::string> judges{"judge-a", "judge-b"};
  std::vector<std::string> ocr_backends{"ocr-0"};
  std::string metadata_judge = "judge-a";
  int max_in_flight = 8;
  int retry_attempts = 3;
  int retry_base_ms = 100;
  double timeout_s = 60.0;
};

struct MediaConfig {
  std::string ffmpeg = "ffmpeg";
};

struct InputsConfig {
  std::filesystem::path taxonomy;
  std::string search_backend;  // fixture:<dir> | live
};

struct RuntimeConfig {
  int workers = 0;       // 0: hardware concurrency
  std::string clock;     // wall | logical; empty picks logical for mock services
  std::uint64_t seed = 7;
};

struct AppConfig {
  PipelineConfig pipeline;
  ServicesConfig services;
  MediaConfig media;
  InputsConfig inputs;
  RuntimeConfig runtime;
  std::filesystem::path source_dir;  // directory the config was loaded from

  bool logical_clock() const {
    return runtime.clock.empty() ? services.mode == "mock" : runtime.clock == "logical";
  }
  int worker_count() const;
};

// Required keys: services.mode, inputs.taxonomy, inputs.search_backend.
// Relative paths resolve against the config file's directory. Environment
// variables SERVICE_BASE_URL and SERVICE_TOKEN override the services block.
// `patch` is a JSON merge patch applied before parsing.
AppConfig load_config(const std::filesystem::path& path, const json& patch = nullptr);
AppConfig config_from_json(const json& j, const std::filesystem::path& source_dir);
json config_to_json(const AppConfig& c);

}  // namespace vtb
