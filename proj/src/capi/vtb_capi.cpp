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

#include "vtb/vtb.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "core/assembler.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/http_services.hpp"
#include "core/metrics.hpp"
#include "core/mock_services.hpp"
#include "core/pipeline.hpp"
#include "core/ssim.hpp"

struct vtb_session {
  std::unique_ptr<vtb::Pipeline> pipeline;
};

struct vtb_mock_server {
  std::unique_ptr<vtb::MockServer> server;
};

namespace {

namespace fs = std::filesystem;
using vtb::json;

thread_local std::string g_error;
thread_local std::string g_error_key;

vtb_status status_of(vtb::ErrorKind k) {
  switch (k) {
    case vtb::ErrorKind::argument: return VTB_ERR_ARGUMENT;
    case vtb::ErrorKind::validation: return VTB_ERR_VALIDATION;
    case vtb::ErrorKind::io: return VTB_ERR_IO;
    case vtb::ErrorKind::config: return VTB_ERR_CONFIG;
    case vtb::ErrorKind::transport: return VTB_ERR_TRANSPORT;
    case vtb::ErrorKind::protocol: return VTB_ERR_PROTOCOL;
    case vtb::ErrorKind::stage: return VTB_ERR_STAGE;
    case vtb::ErrorKind::internal: return VTB_ERR_INTERNAL;
  }
  return VTB_ERR_INTERNAL;
}

vtb_status fail(vtb_status s, std::string msg, std::string key = {}) {
  g_error = std::move(msg);
  g_error_key = std::move(key);
  return s;
}

// Runs fn, translating exceptions into status codes and the thread-local message.
template <typename F>
vtb_status guarded(F&& fn) {
  g_error.clear();
  g_error_key.clear();
  try {
    return fn();
  } catch (const vtb::ConfigError& e) {
    return fail(VTB_ERR_CONFIG, e.what(), e.key());
  } catch (const vtb::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const json::exception& e) {
    return fail(VTB_ERR_VALIDATION, std::string("JSON: ") + e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(VTB_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VTB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VTB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VTB_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_options(const char* text) {
  if (!text || !*text) return json::object();
  auto j = json::parse(text);
  if (!j.is_object()) throw vtb::ArgumentError("options must be a JSON object");
  return j;
}

std::string required_option(const json& o, const char* key) {
  auto it = o.find(key);
  if (it == o.end() || !it->is_string() || it->get<std::string>().empty())
    throw vtb::ArgumentError(std::string("missing option '") + key + "'");
  return it->get<std::string>();
}

void write_samples(const fs::path& out, const std::vector<vtb::InterleavedSample>& samples) {
  std::string body;
  for (const auto& s : samples) body += vtb::dump_line(vtb::sample_to_json(s)) + "\n";
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  vtb::write_file_atomic(out, body);
}

json metrics_command(vtb_session* session, const std::string& cmd, const json& o) {
  if (cmd == "adapt") {
    auto r = vtb::adapt_external(required_option(o, "corpus"), o.value("format", ""));
    json errors = json::array();
    for (const auto& e : r.errors) errors.push_back(json{{"line", e.line}, {"message", e.message}});
    if (o.contains("out")) write_samples(o["out"].get<std::string>(), r.samples);
    return json{{"n_samples", r.samples.size()},
                {"skipped_no_images", r.skipped_no_images},
                {"errors", errors}};
  }

  const fs::path corpus = required_option(o, "corpus");
  auto samples = vtb::read_corpus(corpus);
  json report;
  if (cmd == "stats") {
    report = vtb::stats_to_json(vtb::compute_stats(samples));
  } else if (cmd == "shuffle") {
    const double p = o.value("p", 0.5);
    std::uint64_t seed = o.value("seed", std::uint64_t{7});
    if (session && !o.contains("seed")) seed = session->pipeline->config().runtime.seed;
    auto r = vtb::shuffle_images(samples, p, seed);
    write_samples(required_option(o, "out"), r.samples);
    report = json{{"n_samples", samples.size()}, {"p", p}, {"seed", seed},
                  {"n_selected", r.selected.size()}, {"selected", r.selected}};
    return report;
  } else if (cmd == "insi-sim" || cmd == "ppl") {
    if (!session) throw vtb::ArgumentError("'" + cmd + "' needs a session with services");
    auto& services = session->pipeline->services();
    if (cmd == "insi-sim") {
      const auto base = fs::absolute(corpus).parent_path();
      auto r = vtb::insi_sim(samples, services, [&](const std::string& ref) {
        fs::path p(ref);
        return p.is_absolute() ? p : base / p;
      });
      report = vtb::insi_sim_report_to_json(r);
      if (o.contains("csv")) vtb::write_file_atomic(o["csv"].get<std::string>(), vtb::insi_sim_report_csv(r));
    } else {
      report = vtb::ppl_report_to_json(vtb::ppl_report(samples, services));
    }
  } else {
    throw vtb::ArgumentError("unknown metrics command '" + cmd +
                             "' (expected stats, insi-sim, shuffle, ppl or adapt)");
  }
  if (o.contains("out")) vtb::write_json_atomic(o["out"].get<std::string>(), report);
  return report;
}

}  // namespace

extern "C" {

const char* vtb_version(void) { return "0.1.0"; }

const char* vtb_status_name(vtb_status status) {
  switch (status) {
    case VTB_OK: return "ok";
    case VTB_ERR_ARGUMENT: return "argument";
    case VTB_ERR_VALIDATION: return "validation";
    case VTB_ERR_IO: return "io";
    case VTB_ERR_CONFIG: return "config";
    case VTB_ERR_TRANSPORT: return "transport";
    case VTB_ERR_PROTOCOL: return "protocol";
    case VTB_ERR_STAGE: return "stage";
    case VTB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* vtb_last_error_message(void) { return g_error.c_str(); }
const char* vtb_last_error_key(void) { return g_error_key.c_str(); }

void vtb_string_free(char* s) { std::free(s); }

vtb_status vtb_session_open(const char* config_path, const char* workdir,
                            const char* overrides_json, vtb_session** out) {
  return guarded([&] {
    if (!out) return fail(VTB_ERR_ARGUMENT, "out must not be NULL");
    *out = nullptr;
    if (!config_path || !*config_path) return fail(VTB_ERR_ARGUMENT, "config_path is required");
    std::string wd = workdir && *workdir ? workdir : "";
    if (wd.empty()) {
      const char* env = std::getenv("WORKDIR");
      wd = env && *env ? env : "work";
    }
    auto overrides = parse_options(overrides_json);
    auto cfg = vtb::load_config(config_path, overrides.value("config", json(nullptr)));
    vtb::PipelineOptions opts;
    if (auto it = overrides.find("options"); it != overrides.end()) {
      if (it->contains("judges")) opts.judges = (*it)["judges"].get<std::size_t>();
      if (it->contains("upstream_manifest"))
        opts.upstream_manifest = (*it)["upstream_manifest"].get<std::string>();
    }
    auto s = std::make_unique<vtb_session>();
    s->pipeline = std::make_unique<vtb::Pipeline>(std::move(cfg), fs::path(wd), opts);
    *out = s.release();
    return VTB_OK;
  });
}

void vtb_session_close(vtb_session* session) { delete session; }

vtb_status vtb_run_stage(vtb_session* session, const char* stage, char** report_json) {
  return guarded([&] {
    if (!session || !stage) return fail(VTB_ERR_ARGUMENT, "session and stage are required");
    if (report_json) *report_json = nullptr;
    auto reports = session->pipeline->run(stage);
    bool ok = true;
    json stages = json::array();
    std::string failed;
    for (const auto& r : reports) {
      ok = ok && r.ok();
      stages.push_back(vtb::report_to_json(r));
      for (const auto& k : r.failed_keys) failed += (failed.empty() ? "" : ", ") + r.stage + ":" + k;
    }
    if (report_json) *report_json = dup_string(json{{"ok", ok}, {"stages", stages}}.dump());
    if (!ok) return fail(VTB_ERR_STAGE, "failed items: " + failed);
    return VTB_OK;
  });
}

vtb_status vtb_doctor(vtb_session* session, char** report_json) {
  return guarded([&] {
    if (!session || !report_json) return fail(VTB_ERR_ARGUMENT, "session and report_json are required");
    *report_json = dup_string(session->pipeline->doctor().dump());
    return VTB_OK;
  });
}

vtb_status vtb_metrics_run(vtb_session* session, const char* command, const char* options_json,
                           char** report_json) {
  return guarded([&] {
    if (!command) return fail(VTB_ERR_ARGUMENT, "command is required");
    if (report_json) *report_json = nullptr;
    auto report = metrics_command(session, command, parse_options(options_json));
    if (report_json) *report_json = dup_string(report.dump());
    return VTB_OK;
  });
}

vtb_status vtb_validate_corpus(const char* path, const char* options_json, char** report_json) {
  return guarded([&] {
    if (!path) return fail(VTB_ERR_ARGUMENT, "path is required");
    if (report_json) *report_json = nullptr;
    auto o = parse_options(options_json);
    vtb::SampleRules rules;
    rules.eov_token = o.value("eov_token", std::string(vtb::kDefaultEovToken));
    if (o.contains("token_budget")) rules.token_budget = o["token_budget"].get<std::size_t>();
    if (o.contains("max_images")) rules.max_images = o["max_images"].get<std::size_t>();
    auto r = vtb::validate_corpus(path, rules);
    if (report_json) *report_json = dup_string(vtb::report_to_json(r).dump());
    return VTB_OK;
  });
}

vtb_status vtb_mock_server_start(const char* fixtures_dir, const char* host, int port,
                                 const char* token, vtb_mock_server** out, int* bound_port) {
  return guarded([&] {
    if (!out) return fail(VTB_ERR_ARGUMENT, "out must not be NULL");
    *out = nullptr;
    auto backend = std::make_shared<vtb::MockServices>(fixtures_dir ? fixtures_dir : "");
    auto s = std::make_unique<vtb_mock_server>();
    s->server = std::make_unique<vtb::MockServer>(backend, token ? token : "");
    const int p = s->server->bind(host && *host ? host : "127.0.0.1", port);
    s->server->start();
    if (bound_port) *bound_port = p;
    *out = s.release();
    return VTB_OK;
  });
}

void vtb_mock_server_stop(vtb_mock_server* server) {
  if (!server) return;
  server->server->stop();
  delete server;
}

vtb_status vtb_compute_ssim(const uint8_t* a, const uint8_t* b, int width, int height,
                            double* out) {
  return guarded([&] {
    if (!a || !b || !out) return fail(VTB_ERR_ARGUMENT, "null pointer argument");
    if (width <= 0 || height <= 0) return fail(VTB_ERR_ARGUMENT, "width and height must be positive");
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    vtb::GrayImage ia(width, height), ib(width, height);
    std::memcpy(ia.pixels.data(), a, n);
    std::memcpy(ib.pixels.data(), b, n);
    *out = vtb::compute_ssim(ia, ib);
    return VTB_OK;
  });
}

}  // extern "C"
