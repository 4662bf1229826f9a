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

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/corpus_model.hpp"

namespace vtb {

struct CriteriaScores {
  int relevance = 1;
  int knowledge_density = 1;
  int transcription_quality = 1;
  std::string judge_id;
  // Metadata review only: "inappropriate", "illegal" or "other".
  std::optional<std::string> flag;

  bool all_at_least(int threshold) const {
    return relevance >= threshold && knowledge_density >= threshold &&
           transcription_quality >= threshold;
  }
  bool operator==(const CriteriaScores&) const = default;
};

struct EmbeddingVector {
  std::vector<double> values;
  std::size_t dim() const { return values.size(); }
};

struct OcrResult {
  std::string text;
  int informativeness = 1;
};

struct Transcription {
  std::vector<AsrSegment> segments;
  std::string language = "unknown";
};

enum class ScoreKind { transcript, metadata };
const char* to_string(ScoreKind k);

// The external model services: speech recognition, transcript refinement,
// criteria judging, clip captioning, text/image embedding, OCR and perplexity.
// Implementations must be safe for concurrent use.
class Services {
 public:
  virtual ~Services() = default;
  virtual Transcription transcribe(const std::filesystem::path& audio) = 0;
  virtual std::string refine_text(std::string_view text) = 0;
  virtual CriteriaScores score(std::string_view text, const KnowledgePoint& point,
                               const std::string& judge_id, ScoreKind kind) = 0;
  virtual std::string caption_clip(const std::vector<std::filesystem::path>& frames) = 0;
  virtual std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) = 0;
  virtual std::vector<EmbeddingVector> embed_images(
      const std::vector<std::filesystem::path>& images) = 0;
  virtual OcrResult ocr_frame(const std::filesystem::path& image, const std::string& backend) = 0;
  virtual double perplexity(std::string_view text) = 0;
};

// Contract checks shared by every implementation; violations are ProtocolError.
void check_transcription(const Transcription& t);
void check_scores(const CriteriaScores& s);
void check_ocr(const OcrResult& r);
// Throws ProtocolError unless |v| is within 1e-6 of one.
void check_unit(const EmbeddingVector& v);
EmbeddingVector normalized(std::vector<double> values);
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Retries `fn` on TransportError only, with exponential backoff.
struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds base_delay{100};
};

template <typename Fn>
auto with_retry(const RetryPolicy& policy, Fn&& fn) -> decltype(fn());

// exp(mean surprisal) under a unigram model with additive smoothing:
// p(w) = (c(w) + alpha) / (N + alpha * (V + 1)), one extra slot for unseen
// words. With alpha = 0 unseen words are an ArgumentError.
class UnigramModel {
 public:
  UnigramModel(std::map<std::string, std::size_t> counts, double alpha);
  static UnigramModel fit(std::string_view reference_text, double alpha);

  double probability(const std::string& word) const;
  double perplexity(std::string_view text) const;
  std::size_t vocabulary_size() const { return counts_.size(); }

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t total_ = 0;
  double alpha_;
};

// Built-in reference text for the mock perplexity service.
std::string_view default_reference_corpus();

std::string refine_text_normalize(std::string_view text);

}  // namespace vtb

#include "core/retry_impl.hpp"
