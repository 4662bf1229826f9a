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
#include <memory>
#include <string>
#include <vector>

#include "core/corpus_model.hpp"
#include "core/services.hpp"

namespace vtb {

struct Taxonomy {
  struct SubCourse {
    std::string name;
    std::vector<std::string> points;
  };
  struct Course {
    std::string name;
    std::vector<SubCourse> sub_courses;
  };
  struct Subject {
    std::string name;
    std::vector<Course> courses;
  };
  std::vector<Subject> subjects;

  std::vector<KnowledgePoint> points() const;
  std::size_t course_count() const;
};

// Throws ValidationError for a missing layer or a duplicated point id.
Taxonomy taxonomy_from_json(const json& j);
Taxonomy load_taxonomy(const std::filesystem::path& path);
json taxonomy_to_json(const Taxonomy& t);

struct SearchQuery {
  std::string point_id;
  std::string query;
};

// One query per leaf: "<sub-course>: <point>".
std::vector<SearchQuery> expand_queries(const Taxonomy& t);

struct SearchResult {
  std::string point_id;
  int rank = 1;  // 1-based
  VideoMeta meta;
};

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  // Ranked best-first, at most `k` results.
  virtual std::vector<VideoMeta> search(const std::string& query, int k) = 0;
};

// Reads <dir>/index.json: {"<query string>": [VideoMeta, ...]}. Relative
// media_ref values resolve against <dir>.
class FixtureSearchBackend final : public SearchBackend {
 public:
  explicit FixtureSearchBackend(const std::filesystem::path& dir);
  std::vector<VideoMeta> search(const std::string& query, int k) override;

 private:
  std::map<std::string, std::vector<VideoMeta>> index_;
};

// GET <base>/search?q=<query>&k=<k> returning a JSON array of VideoMeta.
class HttpSearchBackend final : public SearchBackend {
 public:
  explicit HttpSearchBackend(std::string base_url, std::string token = {});
  std::vector<VideoMeta> search(const std::string& query, int k) override;

 private:
  std::string base_url_;
  std::string token_;
};

// "fixture:<dir>" or "live" (uses SEARCH_BASE_URL).
std::unique_ptr<SearchBackend> make_search_backend(const std::string& spec);

std::vector<SearchResult> collect_results(SearchBackend& backend,
                                          const std::vector<SearchQuery>& queries, int top_k);

// Keeps the first occurrence of every video id, preserving order. Later
// duplicates are appended to `dropped` when given.
std::vector<SearchResult> dedup_by_video_id(const std::vector<SearchResult>& results,
                                            std::vector<SearchResult>* dropped = nullptr);

struct MetadataDecision {
  enum class Kind { keep, drop, pending } kind = Kind::keep;
  std::string reason;  // irrelevant | inappropriate | illegal | other, or the pending cause
};

// Asks a judge to review title, description and comments against the point.
// A judge flag drops with that reason; relevance below `pass_threshold`
// drops as irrelevant. Transport failure after retries yields pending.
MetadataDecision filter_metadata(const VideoMeta& meta, const KnowledgePoint& point,
                                 Services& judge, const std::string& judge_id,
                                 int pass_threshold);

// Text the metadata judge sees.
std::string metadata_text(const VideoMeta& meta);

}  // namespace vtb
