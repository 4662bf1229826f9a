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
#include <functional>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/services.hpp"

namespace vtb::testing {

template <typename F, typename... A>
auto call(const F& f, const char* name, A&&... a) {
  if (!f) throw ProtocolError(std::string("fake service has no hook for ") + name);
  return f(std::forward<A>(a)...);
}

// Services whose behaviour is set per test through the public hooks. Unset
// hooks throw ProtocolError so an unexpected call fails loudly.
class FakeServices : public Services {
 public:
  std::function<Transcription(const std::filesystem::path&)> on_transcribe;
  std::function<std::string(std::string_view)> on_refine;
  std::function<CriteriaScores(std::string_view, const KnowledgePoint&, const std::string&, ScoreKind)>
      on_score;
  std::function<std::string(const std::vector<std::filesystem::path>&)> on_caption;
  std::function<std::vector<EmbeddingVector>(const std::vector<std::string>&)> on_embed_texts;
  std::function<std::vector<EmbeddingVector>(const std::vector<std::filesystem::path>&)> on_embed_images;
  std::function<OcrResult(const std::filesystem::path&, const std::string&)> on_ocr;
  std::function<double(std::string_view)> on_ppl;

  Transcription transcribe(const std::filesystem::path& a) override { return call(on_transcribe, "transcribe", a); }
  std::string refine_text(std::string_view t) override { return call(on_refine, "refine", t); }
  CriteriaScores score(std::string_view t, const KnowledgePoint& p, const std::string& j,
                       ScoreKind k) override {
    return call(on_score, "score", t, p, j, k);
  }
  std::string caption_clip(const std::vector<std::filesystem::path>& f) override { return call(on_caption, "caption", f); }
  std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& t) override {
    return call(on_embed_texts, "embed_texts", t);
  }
  std::vector<EmbeddingVector> embed_images(const std::vector<std::filesystem::path>& i) override {
    return call(on_embed_images, "embed_images", i);
  }
  OcrResult ocr_frame(const std::filesystem::path& i, const std::string& b) override { return call(on_ocr, "ocr", i, b); }
  double perplexity(std::string_view t) override { return call(on_ppl, "ppl", t); }
};

}  // namespace vtb::testing
