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
#include <filesystem>
#include <functional>
#include <vector>

#include "core/image.hpp"
#include "core/media.hpp"
#include "core/services.hpp"

namespace vtb {

struct Frame {
  std::size_t index = 0;
  double timestamp_s = 0.0;
  GrayImage pixels;
};

// max(1, floor(duration * fps)) timestamps start, start + 1/fps, ...
std::vector<double> sample_times(double start_s, double end_s, double fps);

// Decode failures propagate as IoError; the caller marks the item pending.
std::vector<Frame> sample_frames(MediaToolkit& media, const std::filesystem::path& video,
                                 double start_s, double end_s, double fps);

// Reference-chain selection shared by every extractor: frame 0 is a keyframe
// and becomes the reference; frame i is added, and becomes the new
// reference, when changed(reference, i) holds.
std::vector<std::size_t> select_keyframes(
    std::size_t n, const std::function<bool(std::size_t ref, std::size_t i)>& changed);

// Keyframe indices. `carried` optionally seeds the reference with a frame
// from before the sequence; frame 0 is then only kept if it differs from it.
std::vector<std::size_t> keyframes_ssim(const std::vector<GrayImage>& frames, double T,
                                        const GrayImage* carried = nullptr);
std::vector<std::size_t> keyframes_pixel(const std::vector<GrayImage>& frames,
                                         double pixel_threshold,
                                         const GrayImage* carried = nullptr);
std::vector<std::size_t> keyframes_semantic(const std::vector<EmbeddingVector>& embeddings,
                                            double cos_threshold,
                                            const EmbeddingVector* carried = nullptr);

std::vector<Frame> extract_keyframes_ssim(const std::vector<Frame>& frames, double T);
std::vector<Frame> extract_keyframes_pixel(const std::vector<Frame>& frames,
                                           double pixel_threshold);
// `embed` maps the frames to unit vectors (normally an image-embedding client).
std::vector<Frame> extract_keyframes_semantic(
    const std::vector<Frame>& frames,
    const std::function<std::vector<EmbeddingVector>(const std::vector<Frame>&)>& embed,
    double cos_threshold);

}  // namespace vtb
