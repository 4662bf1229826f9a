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

#include <memory>
#include <semaphore>
#include <string>
#include <thread>

#include "core/services.hpp"

namespace vtb {

// JSON-over-HTTP client for the service endpoints:
//   POST /transcribe {audio_ref}                  -> {segments, language}
//   POST /refine     {text}                       -> {text}
//   POST /score      {text, knowledge_point, judge_id, kind}
//                                                 -> {relevance, knowledge_density,
//                                                     transcription_quality, flag?}
//   POST /caption    {frame_refs}                 -> {caption}
//   POST /embed      {texts} | {image_refs}       -> {vectors}
//   POST /ocr        {image_ref, backend}         -> {text, informativeness}
//   POST /ppl        {text}                       -> {perplexity}
// File references are paths on a filesystem shared with the service.
class HttpServices final : public Services {
 public:
  struct Options {
    std::string base_url;
    std::string token;
    int max_in_flight = 8;
    RetryPolicy retry;
    double timeout_s = 60.0;
  };

  explicit HttpServices(Options opts);

  Transcription transcribe(const std::filesystem::path& audio) override;
  std::string refine_text(std::string_view text) override;
  CriteriaScores score(std::string_view text, const KnowledgePoint& point,
                       const std::string& judge_id, ScoreKind kind) override;
  std::string caption_clip(const std::vector<std::filesystem::path>& frames) override;
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;
  std::vector<EmbeddingVector> embed_images(
      const std::vector<std::filesystem::path>& images) override;
  OcrResult ocr_frame(const std::filesystem::path& image, const std::string& backend) override;
  double perplexity(std::string_view text) override;

  // Single attempt, no retry; used by `doctor`. Empty string when reachable.
  std::string probe(const std::string& endpoint) const;

 private:
  json post(const std::string& endpoint, const json& body);
  json post_once(const std::string& endpoint, const json& body) const;
  std::vector<EmbeddingVector> parse_vectors(const json& j, std::size_t expected) const;

  Options opts_;
  std::string host_;    // scheme://host:port
  std::string prefix_;  // optional path prefix
  std::counting_semaphore<1024> in_flight_;
};

// Serves a Services implementation (normally MockServices) over the same
// protocol, plus GET /health.
class MockServer {
 public:
  MockServer(std::shared_ptr<Services> backend, std::string token = {});
  ~MockServer();
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void start();  // serve on a background thread
  void run();    // serve on the calling thread until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace vtb
