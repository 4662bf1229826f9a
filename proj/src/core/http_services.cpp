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

#include "core/http_services.hpp"

#include <httplib.h>

#include "core/error.hpp"

namespace vtb {

namespace fs = std::filesystem;

namespace {

struct SemaphoreGuard {
  std::counting_semaphore<1024>& s;
  explicit SemaphoreGuard(std::counting_semaphore<1024>& sem) : s(sem) { s.acquire(); }
  ~SemaphoreGuard() { s.release(); }
};

std::string error_message(const httplib::Result& res) {
  try {
    auto j = json::parse(res->body);
    if (j.is_object() && j.contains("message")) return j["message"].get<std::string>();
  } catch (const std::exception&) {
  }
  return res->body.substr(0, 300);
}

}  // namespace

HttpServices::HttpServices(Options opts)
    : opts_(std::move(opts)), in_flight_(std::max(1, std::min(opts_.max_in_flight, 1024))) {
  auto scheme_end = opts_.base_url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("services.base_url", "base_url needs a scheme");
  auto path_start = opts_.base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    host_ = opts_.base_url;
  } else {
    host_ = opts_.base_url.substr(0, path_start);
    prefix_ = opts_.base_url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
}

json HttpServices::post_once(const std::string& endpoint, const json& body) const {
  httplib::Client cli(host_);
  const auto secs = static_cast<time_t>(opts_.timeout_s);
  cli.set_connection_timeout(std::min<time_t>(secs, 10), 0);
  cli.set_read_timeout(secs, 0);
  cli.set_write_timeout(secs, 0);
  if (!opts_.token.empty()) cli.set_bearer_token_auth(opts_.token);
  auto res = cli.Post(prefix_ + endpoint, body.dump(), "application/json");
  if (!res) {
    throw TransportError(endpoint + ": " + httplib::to_string(res.error()));
  }
  const int status = res->status;
  if (status >= 500) throw TransportError(endpoint + ": HTTP " + std::to_string(status) + " " + error_message(res));
  if (status == 400) throw ArgumentError(endpoint + ": " + error_message(res));
  if (status == 404) throw IoError(endpoint + ": " + error_message(res));
  if (status != 200) throw ProtocolError(endpoint + ": HTTP " + std::to_string(status) + " " + error_message(res));
  try {
    return json::parse(res->body);
  } catch (const json::parse_error&) {
    throw ProtocolError(endpoint + ": response is not JSON");
  }
}

json HttpServices::post(const std::string& endpoint, const json& body) {
  SemaphoreGuard guard(in_flight_);
  return with_retry(opts_.retry, [&] { return post_once(endpoint, body); });
}

std::string HttpServices::probe(const std::string& endpoint) const {
  httplib::Client cli(host_);
  cli.set_connection_timeout(3, 0);
  cli.set_read_timeout(5, 0);
  if (!opts_.token.empty()) cli.set_bearer_token_auth(opts_.token);
  auto res = cli.Post(prefix_ + endpoint, "{}", "application/json");
  if (!res) return httplib::to_string(res.error());
  if (res->status == 404 && res->body.find("\"error\"") == std::string::npos)
    return "endpoint not served (HTTP 404)";
  return {};
}

namespace {

template <typename F>
auto protocol_guard(const std::string& endpoint, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ProtocolError(endpoint + ": malformed response: " + e.what());
  }
}

}  // namespace

Transcription HttpServices::transcribe(const fs::path& audio) {
  auto j = post("/transcribe", json{{"audio_ref", audio.string()}});
  return protocol_guard("/transcribe", [&] {
    Transcription t;
    t.language = j.at("language").get<std::string>();
    for (const auto& s : j.at("segments")) t.segments.push_back(s.get<AsrSegment>());
    check_transcription(t);
    return t;
  });
}

std::string HttpServices::refine_text(std::string_view text) {
  auto j = post("/refine", json{{"text", std::string(text)}});
  return protocol_guard("/refine", [&] {
    auto out = j.at("text").get<std::string>();
    if (out.empty()) throw ProtocolError("/refine: empty text returned");
    return out;
  });
}

CriteriaScores HttpServices::score(std::string_view text, const KnowledgePoint& point,
                                   const std::string& judge_id, ScoreKind kind) {
  auto j = post("/score", json{{"text", std::string(text)}, {"knowledge_point", point},
                               {"judge_id", judge_id}, {"kind", to_string(kind)}});
  return protocol_guard("/score", [&] {
    CriteriaScores s;
    s.relevance = j.at("relevance").get<int>();
    s.knowledge_density = j.at("knowledge_density").get<int>();
    s.transcription_quality = j.at("transcription_quality").get<int>();
    s.judge_id = judge_id;
    if (j.contains("flag") && !j["flag"].is_null()) s.flag = j["flag"].get<std::string>();
    check_scores(s);
    return s;
  });
}

std::string HttpServices::caption_clip(const std::vector<fs::path>& frames) {
  if (frames.empty()) throw ArgumentError("caption_clip: no frames");
  json refs = json::array();
  for (const auto& f : frames) refs.push_back(f.string());
  auto j = post("/caption", json{{"frame_refs", refs}});
  return protocol_guard("/caption", [&] {
    auto c = j.at("caption").get<std::string>();
    if (c.empty()) throw ProtocolError("/caption: empty caption");
    return c;
  });
}

std::vector<EmbeddingVector> HttpServices::parse_vectors(const json& j, std::size_t expected) const {
  return protocol_guard("/embed", [&] {
    std::vector<EmbeddingVector> out;
    for (const auto& v : j.at("vectors")) {
      EmbeddingVector e{v.get<std::vector<double>>()};
      check_unit(e);
      out.push_back(std::move(e));
    }
    if (out.size() != expected) throw ProtocolError("/embed: vector count mismatch");
    return out;
  });
}

std::vector<EmbeddingVector> HttpServices::embed_texts(const std::vector<std::string>& texts) {
  auto j = post("/embed", json{{"texts", texts}});
  return parse_vectors(j, texts.size());
}

std::vector<EmbeddingVector> HttpServices::embed_images(const std::vector<fs::path>& images) {
  json refs = json::array();
  for (const auto& f : images) refs.push_back(f.string());
  auto j = post("/embed", json{{"image_refs", refs}});
  return parse_vectors(j, images.size());
}

OcrResult HttpServices::ocr_frame(const fs::path& image, const std::string& backend) {
  auto j = post("/ocr", json{{"image_ref", image.string()}, {"backend", backend}});
  return protocol_guard("/ocr", [&] {
    OcrResult r{j.at("text").get<std::string>(), j.at("informativeness").get<int>()};
    check_ocr(r);
    return r;
  });
}

double HttpServices::perplexity(std::string_view text) {
  auto j = post("/ppl", json{{"text", std::string(text)}});
  return protocol_guard("/ppl", [&] {
    double p = j.at("perplexity").get<double>();
    if (!(p > 0.0)) throw ProtocolError("/ppl: perplexity must be positive");
    return p;
  });
}

}  // namespace vtb
