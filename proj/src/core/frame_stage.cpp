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

#include "core/frame_stage.hpp"

#include <set>

#include "core/error.hpp"
#include "core/text_util.hpp"

namespace vtb {

OcrFilterResult ocr_and_filter(
    std::vector<Keyframe> keyframes, Services& services, const std::vector<std::string>& backends,
    int score_threshold,
    const std::function<std::filesystem::path(const std::string&)>& resolve) {
  if (backends.empty()) throw ArgumentError("ocr_and_filter: no OCR backends configured");
  OcrFilterResult out;
  for (auto& kf : keyframes) {
    const std::filesystem::path path = resolve ? resolve(kf.image_ref) : std::filesystem::path(kf.image_ref);
    bool answered = false;
    for (const auto& backend : backends) {
      try {
        auto r = services.ocr_frame(path, backend);
        kf.score = r.informativeness;
        kf.ocr_text = r.text;
        answered = true;
        break;
      } catch (const TransportError&) {
      } catch (const ProtocolError&) {
      }
    }
    if (!answered) {
      kf.score.reset();
      kf.ocr_text.reset();
      kf.ocr_failed = true;
      out.kept.push_back(std::move(kf));
    } else if (*kf.score < score_threshold) {
      out.dropped.push_back(std::move(kf));
    } else {
      out.kept.push_back(std::move(kf));
    }
  }
  return out;
}

void dedup_ocr(std::vector<Keyframe>& keyframes, double threshold) {
  std::vector<std::set<std::string>> kept;
  for (auto& kf : keyframes) {
    kf.ocr_kept = false;
    if (!kf.ocr_text) continue;
    auto tokens = text::token_set(*kf.ocr_text);
    if (tokens.empty()) continue;
    bool duplicate = false;
    for (const auto& k : kept) {
      if (text::jaccard(tokens, k) >= threshold) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      kf.ocr_kept = true;
      kept.push_back(std::move(tokens));
    }
  }
}

}  // namespace vtb
