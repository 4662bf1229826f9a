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

#include "core/collection.hpp"

#include <cstdlib>
#include <set>

#include <httplib.h>

#include "core/error.hpp"

namespace vtb {

namespace fs = std::filesystem;

std::vector<KnowledgePoint> Taxonomy::points() const {
  std::vector<KnowledgePoint> out;
  for (const auto& s : subjects)
    for (const auto& c : s.courses)
      for (const auto& sc : c.sub_courses)
        for (const auto& p : sc.points) out.push_back({s.name, c.name, sc.name, p});
  return out;
}

std::size_t Taxonomy::course_count() const {
  std::size_t n = 0;
  for (const auto& s : subjects) n += s.courses.size();
  return n;
}

namespace {

std::string layer_name(const json& j, const char* layer, const std::string& where) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    throw ValidationError("taxonomy: " + std::string(layer) + " without a name under '" + where + "'");
  auto name = j["name"].get<std::string>();
  if (name.empty())
    throw ValidationError("taxonomy: empty " + std::string(layer) + " name under '" + where + "'");
  return name;
}

const json& layer_list(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array())
    throw ValidationError("taxonomy: missing layer '" + std::string(key) + "' under '" + where + "'");
  return *it;
}

}  // namespace

Taxonomy taxonomy_from_json(const json& j) {
  Taxonomy t;
  std::set<std::string> seen;
  for (const auto& js : layer_list(j, "subjects", "<root>")) {
    Taxonomy::Subject subject{layer_name(js, "subject", "<root>"), {}};
    for (const auto& jc : layer_list(js, "courses", subject.name)) {
      Taxonomy::Course course{layer_name(jc, "course", subject.name), {}};
      const auto course_path = subject.name + "/" + course.name;
      for (const auto& jsc : layer_list(jc, "sub_courses", course_path)) {
        Taxonomy::SubCourse sc{layer_name(jsc, "sub-course", course_path), {}};
        const auto sc_path = course_path + "/" + sc.name;
        for (const auto& jp : layer_list(jsc, "points", sc_path)) {
          if (!jp.is_string() || jp.get<std::string>().empty())
            throw ValidationError("taxonomy: empty knowledge point under '" + sc_path + "'");
          auto point = jp.get<std::string>();
          KnowledgePoint kp{subject.name, course.name, sc.name, point};
          if (!seen.insert(kp.id()).second)
            throw ValidationError("taxonomy: duplicate knowledge point '" + kp.id() + "'");
          sc.points.push_back(std::move(point));
        }
        course.sub_courses.push_back(std::move(sc));
      }
      subject.courses.push_back(std::move(course));
    }
    t.subjects.push_back(std::move(subject));
  }
  return t;
}

Taxonomy load_taxonomy(const fs::path& path) { return taxonomy_from_json(read_json_file(path)); }

json taxonomy_to_json(const Taxonomy& t) {
  json subjects = json::array();
  for (const auto& s : t.subjects) {
    json courses = json::array();
    for (const auto& c : s.courses) {
      json scs = json::array();
      for (const auto& sc : c.sub_courses) scs.push_back(json{{"name", sc.name}, {"points", sc.points}});
      courses.push_back(json{{"name", c.name}, {"sub_courses", scs}});
    }
    subjects.push_back(json{{"name", s.name}, {"courses", courses}});
  }
  return json{{"subjects", subjects}};
}

std::vector<SearchQuery> expand_queries(const Taxonomy& t) {
  std::vector<SearchQuery> out;
  for (const auto& kp : t.points()) out.push_back({kp.id(), kp.sub_course + ": " + kp.point});
  return out;
}

FixtureSearchBackend::FixtureSearchBackend(const fs::path& dir) {
  auto j = read_json_file(dir / "index.json");
  if (!j.is_object()) throw ValidationError("search fixture index must be an object");
  for (const auto& [query, list] : j.items()) {
    auto& dest = index_[query];
    for (const auto& m : list) {
      auto meta = m.get<VideoMeta>();
      if (!meta.media_ref.empty() && fs::path(meta.media_ref).is_relative())
        meta.media_ref = (dir / meta.media_ref).lexically_normal().string();
      dest.push_back(std::move(meta));
    }
  }
}

std::vector<VideoMeta> FixtureSearchBackend::search(const std::string& query, int k) {
  auto it = index_.find(query);
  if (it == index_.end()) return {};
  std::vector<VideoMeta> out(it->second.begin(),
                             it->second.begin() + std::min<std::size_t>(it->second.size(), static_cast<std::size_t>(k)));
  return out;
}

HttpSearchBackend::HttpSearchBackend(std::string base_url, std::string token)
    : base_url_(std::move(base_url)), token_(std::move(token)) {}

std::vector<VideoMeta> HttpSearchBackend::search(const std::string& query, int k) {
  httplib::Client cli(base_url_);
  if (!token_.empty()) cli.set_bearer_token_auth(token_);
  httplib::Params params{{"q", query}, {"k", std::to_string(k)}};
  auto res = cli.Get("/search", params, httplib::Headers{});
  if (!res) throw TransportError("search: " + httplib::to_string(res.error()));
  if (res->status >= 500) throw TransportError("search: HTTP " + std::to_string(res->status));
  if (res->status != 200) throw ProtocolError("search: HTTP " + std::to_string(res->status));
  try {
    auto list = json::parse(res->body).get<std::vector<VideoMeta>>();
    if (list.size() > static_cast<std::size_t>(k)) list.resize(static_cast<std::size_t>(k));
    return list;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("search: malformed response: ") + e.what());
  }
}

std::unique_ptr<SearchBackend> make_search_backend(const std::string& spec) {
  if (spec.rfind("fixture:", 0) == 0) return std::make_unique<FixtureSearchBackend>(spec.substr(8));
  if (spec == "live") {
    const char* url = std::getenv("SEARCH_BASE_URL");
    if (!url || !*url) throw ConfigError("SEARCH_BASE_URL", "live search needs SEARCH_BASE_URL");
    const char* tok = std::getenv("SERVICE_TOKEN");
    return std::make_unique<HttpSearchBackend>(url, tok ? tok : "");
  }
  throw ConfigError("inputs.search_backend", "unknown search backend '" + spec + "'");
}

std::vector<SearchResult> collect_results(SearchBackend& backend,
                                          const std::vector<SearchQuery>& queries, int top_k) {
  std::vector<SearchResult> out;
  for (const auto& q : queries) {
    auto metas = backend.search(q.query, top_k);
    int rank = 0;
    for (auto& m : metas) {
      if (++rank > top_k) break;
      m.source_point = q.point_id;
      out.push_back({q.point_id, rank, std::move(m)});
    }
  }
  return out;
}

std::vector<SearchResult> dedup_by_video_id(const std::vector<SearchResult>& results,
                                            std::vector<SearchResult>* dropped) {
  std::set<std::string> seen;
  std::vector<SearchResult> out;
  for (const auto& r : results) {
    if (seen.insert(r.meta.video_id).second) {
      out.push_back(r);
    } else if (dropped) {
      dropped->push_back(r);
    }
  }
  return out;
}

std::string metadata_text(const VideoMeta& meta) {
  std::string t = "Title: " + meta.title;
  if (!meta.description.empty()) t += "\nDescription: " + meta.description;
  for (const auto& c : meta.comments) t += "\nComment: " + c;
  return t;
}

MetadataDecision filter_metadata(const VideoMeta& meta, const KnowledgePoint& point,
                                 Services& judge, const std::string& judge_id,
                                 int pass_threshold) {
  if (meta.title.empty()) throw ArgumentError("filter_metadata: video " + meta.video_id + " has no title");
  CriteriaScores s;
  try {
    s = judge.score(metadata_text(meta), point, judge_id, ScoreKind::metadata);
  } catch (const TransportError& e) {
    return {MetadataDecision::Kind::pending, e.what()};
  }
  if (s.flag) {
    const auto& f = *s.flag;
    const bool known = f == "irrelevant" || f == "inappropriate" || f == "illegal";
    return {MetadataDecision::Kind::drop, known ? f : "other"};
  }
  if (s.relevance < pass_threshold) return {MetadataDecision::Kind::drop, "irrelevant"};
  return {MetadataDecision::Kind::keep, {}};
}

}  // namespace vtb
