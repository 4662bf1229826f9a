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

#include "core/corpus_model.hpp"
#include "core/services.hpp"

namespace vtb {

struct OcrFilterResult {
  std::vector<Keyframe> kept;
  std::vector<Keyframe> dropped;  // score below threshold
};

// Runs OCR on every keyframe, trying `backends` in order until one answers.
// Frames scoring below `score_threshold` are dropped. When every backend
// fails the frame is kept unscored with ocr_failed set. `resolve` maps an
// image_ref to a readable path.
OcrFilterResult ocr_and_filter(
    std::vector<Keyframe> keyframes, Services& services, const std::vector<std::string>& backends,
    int score_threshold,
    const std::function<std::filesystem::path(const std::string&)>& resolve = {});

// Sets ocr_kept on time-ordered keyframes of one video: an OCR text is kept
// unless its token-set Jaccard similarity with an earlier kept text reaches
// `threshold`. Empty or absent OCR is never kept. Images are untouched.
void dedup_ocr(std::vector<Keyframe>& keyframes, double threshold);

}  // namespace vtb
