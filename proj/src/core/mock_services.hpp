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
#include <set>
#include <string>
#include <vector>

#include "core/image.hpp"
#include "core/services.hpp"

namespace vtb {

// Deterministic offline stand-ins for every service, driven by optional
// fixture tables in a directory:
//
//   transcripts.json   {"<sha256 of audio file>": {"language", "segments": [...]}}
//   scores.json        [{"judge_id": "*"|id, "kind": "*"|"transcript"|"metadata",
//                        "match": substring, "relevance", "knowledge_density",
//                        "transcription_quality", "flag"?}]
//   captions.json      {"code:<n>" | "<pixel hash>": caption}
//   ocr.json           {"code:<n>" | "<pixel hash>": {"text", "informativeness"}}
//   ppl_reference.txt  reference text for the unigram perplexity model
//   faults.json        {"transport": ["/score:judge-b", "/ocr", ...]}
//
// Without a table entry each service falls back to a fixed heuristic.
class MockServices final : public Services {
 public:
  static constexpr std::size_t kTextDim = 512;
  static constexpr int kImageGrid = 8;

  explicit MockServices(const std::filesystem::path& fixtures_dir = {});

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

  // Heuristic judge used when no fixture entry matches.
  static CriteriaScores heuristic_scores(std::string_view text, const KnowledgePoint& point);
  static EmbeddingVector embed_text(std::string_view text);
  static EmbeddingVector embed_image(const GrayImage& img);
  static std::size_t text_bucket(std::string_view lowered_word);

 private:
  struct ScoreRule {
    std::string judge_id;
    std::string kind;
    std::string match;
    CriteriaScores scores;
  };

  void maybe_fail(const std::string& endpoint) const;
  std::string image_key_lookup(const std::filesystem::path& image,
                               const std::map<std::string, std::string>& table) const;

  std::map<std::string, Transcription> transcripts_;
  std::vector<ScoreRule> score_rules_;
  std::map<std::string, std::string> captions_;
  std::map<std::string, std::string> ocr_raw_;  // key -> serialized OcrResult
  std::set<std::string> faults_;
  UnigramModel ppl_model_;
};

}  // namespace vtb
