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

#include <httplib.h>

#include "core/error.hpp"
#include "core/http_services.hpp"

namespace vtb {

namespace fs = std::filesystem;

struct MockServer::Impl {
  std::shared_ptr<Services> backend;
  std::string token;
  httplib::Server server;
  int port = -1;
};

namespace {

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return 400;
    case ErrorKind::io: return 404;
    case ErrorKind::transport: return 503;
    case ErrorKind::protocol:
    case ErrorKind::validation: return 422;
    default: return 500;
  }
}

void reply_error(httplib::Response& res, int status, const std::string& kind, const std::string& msg) {
  res.status = status;
  res.set_content(json{{"error", kind}, {"message", msg}}.dump(), "application/json");
}

using Handler = std::function<json(const json&)>;

httplib::Server::Handler wrap(const MockServer* /*unused*/, std::string token, Handler h) {
  return [token = std::move(token), h = std::move(h)](const httplib::Request& req,
                                                      httplib::Response& res) {
    if (!token.empty() && req.get_header_value("Authorization") != "Bearer " + token) {
      reply_error(res, 401, "auth", "missing or wrong bearer token");
      return;
    }
    try {
      auto body = json::parse(req.body);
      res.set_content(h(body).dump(), "application/json");
    } catch (const Error& e) {
      reply_error(res, status_for(e.kind()), to_string(e.kind()), e.what());
    } catch (const json::exception& e) {
      reply_error(res, 400, "argument", std::string("bad request: ") + e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

MockServer::MockServer(std::shared_ptr<Services> backend, std::string token)
    : impl_(std::make_unique<Impl>()) {
  impl_->backend = std::move(backend);
  impl_->token = std::move(token);
  auto& svc = *impl_->backend;
  auto& srv = impl_->server;
  const auto& tok = impl_->token;

  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
  srv.Post("/transcribe", wrap(this, tok, [&svc](const json& b) {
    auto t = svc.transcribe(fs::path(b.at("audio_ref").get<std::string>()));
    return json{{"segments", t.segments}, {"language", t.language}};
  }));
  srv.Post("/refine", wrap(this, tok, [&svc](const json& b) {
    return json{{"text", svc.refine_text(b.at("text").get<std::string>())}};
  }));
  srv.Post("/score", wrap(this, tok, [&svc](const json& b) {
    auto point = b.at("knowledge_point").get<KnowledgePoint>();
    auto kind = b.value("kind", "transcript") == "metadata" ? ScoreKind::metadata
                                                            : ScoreKind::transcript;
    auto s = svc.score(b.at("text").get<std::string>(), point, b.at("judge_id").get<std::string>(),
                       kind);
    json out{{"relevance", s.relevance},
             {"knowledge_density", s.knowledge_density},
             {"transcription_quality", s.transcription_quality}};
    if (s.flag) out["flag"] = *s.flag;
    return out;
  }));
  srv.Post("/caption", wrap(this, tok, [&svc](const json& b) {
    std::vector<fs::path> frames;
    for (const auto& f : b.at("frame_refs")) frames.emplace_back(f.get<std::string>());
    return json{{"caption", svc.caption_clip(frames)}};
  }));
  srv.Post("/embed", wrap(this, tok, [&svc](const json& b) {
    std::vector<EmbeddingVector> vs;
    if (b.contains("image_refs")) {
      std::vector<fs::path> imgs;
      for (const auto& f : b.at("image_refs")) imgs.emplace_back(f.get<std::string>());
      vs = svc.embed_images(imgs);
    } else {
      vs = svc.embed_texts(b.at("texts").get<std::vector<std::string>>());
    }
    json arr = json::array();
    for (const auto& v : vs) arr.push_back(v.values);
    return json{{"vectors", arr}};
  }));
  srv.Post("/ocr", wrap(this, tok, [&svc](const json& b) {
    auto r = svc.ocr_frame(fs::path(b.at("image_ref").get<std::string>()), b.value("backend", "ocr-0"));
    return json{{"text", r.text}, {"informativeness", r.informativeness}};
  }));
  srv.Post("/ppl", wrap(this, tok, [&svc](const json& b) {
    return json{{"perplexity", svc.perplexity(b.at("text").get<std::string>())}};
  }));
}

MockServer::~MockServer() { stop(); }

int MockServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
  } else {
    impl_->port = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return impl_->port;
}

void MockServer::start() {
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void MockServer::run() { impl_->server.listen_after_bind(); }

void MockServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace vtb
