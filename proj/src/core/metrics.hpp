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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/corpus_model.hpp"
#include "core/image.hpp"
#include "core/services.hpp"

namespace vtb {

// Per-pair score (cosine(e_i, e_j) + SSIM(img_i, img_j)) / 2 averaged over all
// unordered pairs. Pairs of different sizes are compared after resizing both
// to the smaller common size. Needs at least two images.
double insi_sim_sample(const std::vector<GrayImage>& images,
                       const std::vector<EmbeddingVector>& embeddings);

struct InSiSimReport {
  std::map<int, double> per_L;                // L in 4..8 with at least one sample
  std::map<int, std::size_t> n_samples_per_L;
  std::map<int, double> other_L;              // image counts outside 4..8
  std::map<int, std::size_t> n_samples_other_L;
  std::size_t n_excluded = 0;                 // fewer than two images
  double overall_avg = 0.0;                   // mean of per_L values
};

json insi_sim_report_to_json(const InSiSimReport& r);
// "L,score,n_samples" rows for the 4..8 buckets.
std::string insi_sim_report_csv(const InSiSimReport& r);

// Loads images through `resolve` (image_ref -> path) and embeds them with
// `services`. Samples are bucketed by their exact image count.
InSiSimReport insi_sim(const std::vector<InterleavedSample>& samples, Services& services,
                       const std::function<std::filesystem::path(const std::string&)>& resolve);

struct ShuffleResult {
  std::vector<InterleavedSample> samples;
  std::vector<std::size_t> selected;  // indices, ascending
};

// Picks exactly ceil(p * N) samples with a seeded generator and permutes the
// image elements among the image positions of each. A permutation that would
// leave a sample with at least two distinct images unchanged is rotated by one.
ShuffleResult shuffle_images(const std::vector<InterleavedSample>& samples, double p,
                             std::uint64_t seed);

struct PplReport {
  double mean_ppl = 0.0;
  std::vector<std::pair<std::string, double>> per_sample;
  std::size_t skipped = 0;
};

PplReport ppl_report(const std::vector<InterleavedSample>& samples, Services& services);
json ppl_report_to_json(const PplReport& r);

// matched-list: {"text_list": [...], "image_info": [{"image_name"|"raw_url",
//   "matched_text_index"}], "id"?} ; images precede their matched text.
// parallel-list: {"images": [ref|null ...], "texts": [text|null ...], "id"?}
//   with exactly one non-null entry per position.
struct AdaptError {
  std::size_t line = 0;
  std::string message;
};

struct AdaptResult {
  std::vector<InterleavedSample> samples;
  std::vector<AdaptError> errors;
  std::size_t skipped_no_images = 0;
};

// Image timestamps are their ordinal position in the document.
AdaptResult adapt_external(const std::filesystem::path& path, const std::string& format);

}  // namespace vtb
