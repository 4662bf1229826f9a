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

#include "core/config.hpp"

#include <cstdlib>
#include <thread>

#include "core/error.hpp"

namespace vtb {

namespace fs = std::filesystem;

const char* to_string(PackingStrategy s) {
  switch (s) {
    case PackingStrategy::per_video: return "per_video";
    case PackingStrategy::split_video: return "split_video";
    case PackingStrategy::concat: return "concat";
  }
  return "concat";
}

PackingStrategy packing_strategy_from_string(const std::string& s) {
  if (s == "per_video") return PackingStrategy::per_video;
  if (s == "split_video") return PackingStrategy::split_video;
  if (s == "concat") return PackingStrategy::concat;
  throw ConfigError("pipeline.packing_strategy", "unknown packing strategy '" + s + "'");
}

const char* to_string(KeyframeExtractor k) {
  switch (k) {
    case KeyframeExtractor::ssim: return "ssim";
    case KeyframeExtractor::pixel: return "pixel";
    case KeyframeExtractor::semantic: return "semantic";
  }
  return "ssim";
}

KeyframeExtractor keyframe_extractor_from_string(const std::string& s) {
  if (s == "ssim") return KeyframeExtractor::ssim;
  if (s == "pixel") return KeyframeExtractor::pixel;
  if (s == "semantic") return KeyframeExtractor::semantic;
  throw ConfigError("pipeline.keyframe_extractor", "unknown keyframe extractor '" + s + "'");
}

void PipelineConfig::validate() const {
  auto bad = [](const char* key, const std::string& why) {
    throw ConfigError(std::string("pipeline.") + key, std::string("pipeline.") + key + ": " + why);
  };
  if (!(ssim_threshold_T > 0.0 && ssim_threshold_T < 1.0)) bad("ssim_threshold_T", "must be in (0,1)");
  if (!(frame_sample_fps > 0.0)) bad("frame_sample_fps", "must be positive");
  if (!(clip_min_s > 0.0)) bad("clip_min_s", "must be positive");
  if (!(clip_min_s <= clip_target_s && clip_target_s <= clip_max_s))
    bad("clip_target_s", "requires clip_min_s <= clip_target_s <= clip_max_s");
  if (min_asr_tokens < 0) bad("min_asr_tokens", "must be >= 0");
  if (min_duration_s < 0) bad("min_duration_s", "must be >= 0");
  if (!(caption_asr_sim_threshold >= -1.0 && caption_asr_sim_threshold <= 1.0))
    bad("caption_asr_sim_threshold", "must be in [-1,1]");
  if (criteria_pass_threshold < 1 || criteria_pass_threshold > 5)
    bad("criteria_pass_threshold", "must be in 1..5");
  if (keyframe_score_threshold < 1 || keyframe_score_threshold > 5)
    bad("keyframe_score_threshold", "must be in 1..5");
  if (!(ocr_dedup_jaccard >= 0.0 && ocr_dedup_jaccard <= 1.0))
    bad("ocr_dedup_jaccard", "must be in [0,1]");
  if (token_budget == 0) bad("token_budget", "must be positive");
  if (max_images_per_sample == 0) bad("max_images_per_sample", "must be positive");
  if (eov_token.empty()) bad("eov_token", "must be non-empty");
  if (top_k_search_results < 1) bad("top_k_search_results", "must be >= 1");
  if (!(pixel_threshold >= 0.0)) bad("pixel_threshold", "must be >= 0");
  if (!(semantic_threshold > -1.0 && semantic_threshold < 1.0))
    bad("semantic_threshold", "must be in (-1,1)");
  if (caption_frames == 0) bad("caption_frames", "must be positive");
}

void to_json(json& j, const PipelineConfig& c) {
  j = json{{"ssim_threshold_T", c.ssim_threshold_T},
           {"frame_sample_fps", c.frame_sample_fps},
           {"clip_target_s", c.clip_target_s},
           {"clip_min_s", c.clip_min_s},
           {"clip_max_s", c.clip_max_s},
           {"min_asr_tokens", c.min_asr_tokens},
           {"min_duration_s", c.min_duration_s},
           {"caption_asr_sim_threshold", c.caption_asr_sim_threshold},
           {"criteria_pass_threshold", c.criteria_pass_threshold},
           {"keyframe_score_threshold", c.keyframe_score_threshold},
           {"ocr_dedup_jaccard", c.ocr_dedup_jaccard},
           {"token_budget", c.token_budget},
           {"max_images_per_sample", c.max_images_per_sample},
           {"eov_token", c.eov_token},
           {"packing_strategy", to_string(c.packing_strategy)},
           {"top_k_search_results", c.top_k_search_results},
           {"keyframe_extractor", to_string(c.keyframe_extractor)},
           {"pixel_threshold", c.pixel_threshold},
           {"semantic_threshold", c.semantic_threshold},
           {"use_refined_asr", c.use_refined_asr},
           {"use_ocr", c.use_ocr},
           {"carry_reference_across_clips", c.carry_reference_across_clips},
           {"caption_frames", c.caption_frames}};
}

namespace {

template <typename T>
void read_key(const json& j, const char* section, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(section) + "." + key,
                      std::string(section) + "." + key + ": wrong type");
  }
}

template <typename T>
void read_count(const json& j, const char* section, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number_integer() || it->get<long long>() < 0)
    throw ConfigError(std::string(section) + "." + key,
                      std::string(section) + "." + key + ": must be a non-negative integer");
  out = static_cast<T>(it->get<long long>());
}

const json& section(const json& j, const char* name) {
  static const json empty = json::object();
  auto it = j.find(name);
  if (it == j.end()) return empty;
  if (!it->is_object()) throw ConfigError(name, std::string(name) + ": must be an object");
  return *it;
}

const json& required(const json& obj, const char* sec, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError(std::string(sec) + "." + key,
                      std::string("missing config key: ") + sec + "." + key);
  return *it;
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j) {
  PipelineConfig c;
  const char* s = "pipeline";
  read_key(j, s, "ssim_threshold_T", c.ssim_threshold_T);
  read_key(j, s, "frame_sample_fps", c.frame_sample_fps);
  read_key(j, s, "clip_target_s", c.clip_target_s);
  read_key(j, s, "clip_min_s", c.clip_min_s);
  read_key(j, s, "clip_max_s", c.clip_max_s);
  read_key(j, s, "min_asr_tokens", c.min_asr_tokens);
  read_key(j, s, "min_duration_s", c.min_duration_s);
  read_key(j, s, "caption_asr_sim_threshold", c.caption_asr_sim_threshold);
  read_key(j, s, "criteria_pass_threshold", c.criteria_pass_threshold);
  read_key(j, s, "keyframe_score_threshold", c.keyframe_score_threshold);
  read_key(j, s, "ocr_dedup_jaccard", c.ocr_dedup_jaccard);
  read_count(j, s, "token_budget", c.token_budget);
  read_count(j, s, "max_images_per_sample", c.max_images_per_sample);
  read_key(j, s, "eov_token", c.eov_token);
  if (auto it = j.find("packing_strategy"); it != j.end())
    c.packing_strategy = packing_strategy_from_string(it->get<std::string>());
  read_key(j, s, "top_k_search_results", c.top_k_search_results);
  if (auto it = j.find("keyframe_extractor"); it != j.end())
    c.keyframe_extractor = keyframe_extractor_from_string(it->get<std::string>());
  read_key(j, s, "pixel_threshold", c.pixel_threshold);
  read_key(j, s, "semantic_threshold", c.semantic_threshold);
  read_key(j, s, "use_refined_asr", c.use_refined_asr);
  read_key(j, s, "use_ocr", c.use_ocr);
  read_key(j, s, "carry_reference_across_clips", c.carry_reference_across_clips);
  read_count(j, s, "caption_frames", c.caption_frames);
  c.validate();
  return c;
}

int AppConfig::worker_count() const {
  if (runtime.workers > 0) return runtime.workers;
  auto n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

AppConfig config_from_json(const json& j, const fs::path& source_dir) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  AppConfig c;
  c.source_dir = source_dir;
  auto resolve = [&](const std::string& p) -> fs::path {
    if (p.empty()) return {};
    fs::path path(p);
    return path.is_absolute() ? path : source_dir / path;
  };

  c.pipeline = pipeline_config_from_json(section(j, "pipeline"));

  const auto& svc = section(j, "services");
  c.services.mode = required(svc, "services", "mode").get<std::string>();
  if (c.services.mode != "mock" && c.services.mode != "http")
    throw ConfigError("services.mode", "services.mode must be 'mock' or 'http'");
  read_key(svc, "services", "base_url", c.services.base_url);
  std::string fixtures;
  read_key(svc, "services", "fixtures_dir", fixtures);
  c.services.fixtures_dir = resolve(fixtures);
  read_key(svc, "services", "judges", c.services.judges);
  read_key(svc, "services", "ocr_backends", c.services.ocr_backends);
  read_key(svc, "services", "metadata_judge", c.services.metadata_judge);
  read_key(svc, "services", "max_in_flight", c.services.max_in_flight);
  read_key(svc, "services", "retry_attempts", c.services.retry_attempts);
  read_key(svc, "services", "retry_base_ms", c.services.retry_base_ms);
  read_key(svc, "services", "timeout_s", c.services.timeout_s);
  if (c.services.judges.empty())
    throw ConfigError("services.judges", "services.judges must list at least one judge");
  if (c.services.ocr_backends.empty())
    throw ConfigError("services.ocr_backends", "services.ocr_backends must be non-empty");
  if (c.services.max_in_flight < 1)
    throw ConfigError("services.max_in_flight", "services.max_in_flight must be >= 1");
  if (c.services.retry_attempts < 1)
    throw ConfigError("services.retry_attempts", "services.retry_attempts must be >= 1");

  const auto& media = section(j, "media");
  read_key(media, "media", "ffmpeg", c.media.ffmpeg);

  const auto& in = section(j, "inputs");
  c.inputs.taxonomy = resolve(required(in, "inputs", "taxonomy").get<std::string>());
  c.inputs.search_backend = required(in, "inputs", "search_backend").get<std::string>();
  if (c.inputs.search_backend.rfind("fixture:", 0) == 0) {
    c.inputs.search_backend = "fixture:" + resolve(c.inputs.search_backend.substr(8)).string();
  } else if (c.inputs.search_backend != "live") {
    throw ConfigError("inputs.search_backend",
                      "inputs.search_backend must be 'fixture:<dir>' or 'live'");
  }

  const auto& rt = section(j, "runtime");
  read_key(rt, "runtime", "workers", c.runtime.workers);
  read_key(rt, "runtime", "clock", c.runtime.clock);
  read_key(rt, "runtime", "seed", c.runtime.seed);
  if (!c.runtime.clock.empty() && c.runtime.clock != "wall" && c.runtime.clock != "logical")
    throw ConfigError("runtime.clock", "runtime.clock must be 'wall' or 'logical'");

  if (const char* url = std::getenv("SERVICE_BASE_URL"); url && *url) c.services.base_url = url;
  if (const char* tok = std::getenv("SERVICE_TOKEN"); tok && *tok) c.services.token = tok;
  if (c.services.mode == "http" && c.services.base_url.empty())
    throw ConfigError("services.base_url", "missing config key: services.base_url (http mode)");
  return c;
}

AppConfig load_config(const fs::path& path, const json& patch) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const IoError& e) {
    throw ConfigError("", e.what());
  } catch (const ValidationError& e) {
    throw ConfigError("", e.what());
  }
  if (!patch.is_null()) j.merge_patch(patch);
  try {
    return config_from_json(j, fs::absolute(path).parent_path());
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("config: ") + e.what());
  }
}

json config_to_json(const AppConfig& c) {
  return json{
      {"pipeline", c.pipeline},
      {"services",
       {{"mode", c.services.mode},
        {"base_url", c.services.base_url},
        {"fixtures_dir", c.services.fixtures_dir.string()},
        {"judges", c.services.judges},
        {"ocr_backends", c.services.ocr_backends},
        {"metadata_judge", c.services.metadata_judge},
        {"max_in_flight", c.services.max_in_flight},
        {"retry_attempts", c.services.retry_attempts}}},
      {"media", {{"ffmpeg", c.media.ffmpeg}}},
      {"inputs",
       {{"taxonomy", c.inputs.taxonomy.string()}, {"search_backend", c.inputs.search_backend}}},
      {"runtime", {{"workers", c.runtime.workers}, {"clock", c.runtime.clock},
                   {"seed", c.runtime.seed}}}};
}

}  // namespace vtb
