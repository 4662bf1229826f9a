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

// vtb: command-line front end. Everything goes through the C API.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vtb/vtb.h"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitStage = 1;
constexpr int kExitConfig = 2;

int report_error(vtb_status s) {
  const std::string key = vtb_last_error_key();
  if (s == VTB_ERR_CONFIG) {
    std::cerr << "config error";
    if (!key.empty()) std::cerr << " [" << key << "]";
    std::cerr << ": " << vtb_last_error_message() << "\n";
    return kExitConfig;
  }
  std::cerr << vtb_status_name(s) << " error: " << vtb_last_error_message() << "\n";
  return s == VTB_ERR_ARGUMENT ? kExitConfig : kExitStage;
}

void print_json(char* s) {
  if (!s) return;
  std::cout << json::parse(s).dump(2) << "\n";
  vtb_string_free(s);
}

std::string absolute(const std::string& p) { return p.empty() ? p : fs::absolute(p).string(); }

struct Common {
  std::string config;
  std::string workdir;
  json patch = json::object();
  json options = json::object();

  void add_to(CLI::App* app, bool config_required = true) {
    auto* opt = app->add_option("--config", config, "Config file (JSON)");
    if (config_required) opt->required();
    app->add_option("--workdir", workdir, "Work directory (default: $WORKDIR or ./work)");
  }
};

// Opens a session; returns an exit code on failure.
std::optional<int> open_session(Common& c, vtb_session** out) {
  json overrides = json::object();
  if (!c.patch.empty()) overrides["config"] = c.patch;
  if (!c.options.empty()) overrides["options"] = c.options;
  const std::string text = overrides.dump();
  const auto s = vtb_session_open(c.config.c_str(), c.workdir.empty() ? nullptr : c.workdir.c_str(),
                                  text.c_str(), out);
  if (s != VTB_OK) return report_error(s);
  return std::nullopt;
}

int run_stage(Common& c, const std::string& stage) {
  vtb_session* session = nullptr;
  if (auto rc = open_session(c, &session)) return *rc;
  char* report = nullptr;
  const auto s = vtb_run_stage(session, stage.c_str(), &report);
  print_json(report);
  vtb_session_close(session);
  return s == VTB_OK ? kExitOk : report_error(s);
}

volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vtb: build and audit image-text interleaved corpora from instructional videos"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vtb_version()));

  // run
  Common run_c;
  std::string run_stage_name = "all";
  bool run_mock = false;
  auto* run = app.add_subcommand("run", "Run one stage or the whole pipeline");
  run->add_option("stage", run_stage_name, "collect|video|clip|frame|assemble|metrics|all")
      ->check(CLI::IsMember({"collect", "video", "clip", "frame", "assemble", "metrics", "all"}));
  run_c.add_to(run);
  run->add_flag("--mock", run_mock, "Use the offline mock services");

  // collect
  Common col_c;
  std::string col_taxonomy, col_backend;
  int col_top_k = 0;
  auto* col = app.add_subcommand("collect", "Expand the taxonomy, search, dedup and review metadata");
  col_c.add_to(col);
  col->add_option("--taxonomy", col_taxonomy, "Taxonomy file");
  col->add_option("--backend", col_backend, "fixture:<dir> | live");
  col->add_option("--top-k", col_top_k, "Results kept per knowledge point")->check(CLI::PositiveNumber);

  // video-stage
  Common vid_c;
  std::string vid_in;
  std::size_t vid_judges = 0;
  auto* vid = app.add_subcommand("video-stage", "Audio, ASR, rule and judge filters, refinement");
  vid_c.add_to(vid);
  vid->add_option("--in", vid_in, "Upstream (collect) manifest");
  vid->add_option("--judges", vid_judges, "Number of configured judges to consult")
      ->check(CLI::PositiveNumber);

  Common clip_c, frame_c;
  auto* clip = app.add_subcommand("clip-stage", "Merge ASR, cut clips, caption filter");
  clip_c.add_to(clip);
  auto* frame = app.add_subcommand("frame-stage", "Keyframes, OCR scoring and dedup");
  frame_c.add_to(frame);

  // assemble
  Common asm_c;
  std::string asm_strategy, asm_eov;
  std::size_t asm_budget = 0, asm_max_images = 0;
  auto* assemble = app.add_subcommand("assemble", "Interleave and pack the corpus");
  asm_c.add_to(assemble);
  assemble->add_option("--strategy", asm_strategy, "per_video|split_video|concat")
      ->check(CLI::IsMember({"per_video", "split_video", "concat"}));
  assemble->add_option("--budget", asm_budget, "Token budget per sample")->check(CLI::PositiveNumber);
  assemble->add_option("--max-images", asm_max_images, "Images per sample")->check(CLI::PositiveNumber);
  assemble->add_option("--eov", asm_eov, "End-of-video token");

  // metrics
  Common met_c;
  std::string met_cmd, met_corpus, met_out, met_csv, met_format;
  double met_p = 0.5;
  std::optional<std::uint64_t> met_seed;
  auto* met = app.add_subcommand("metrics", "Corpus statistics, InSI-SIM, shuffle, perplexity, adapters");
  met->add_option("command", met_cmd, "stats|insi-sim|shuffle|ppl|adapt")
      ->required()
      ->check(CLI::IsMember({"stats", "insi-sim", "shuffle", "ppl", "adapt"}));
  met_c.add_to(met, false);
  met->add_option("--corpus", met_corpus, "Input corpus (default: <workdir>/corpus.jsonl)");
  met->add_option("--out", met_out, "Output file");
  met->add_option("--csv", met_csv, "InSI-SIM plot data (CSV)");
  met->add_option("--p", met_p, "Fraction of samples to shuffle");
  met->add_option("--seed", met_seed, "Shuffle seed");
  met->add_option("--format", met_format, "adapt: matched-list|parallel-list");

  // doctor
  Common doc_c;
  auto* doc = app.add_subcommand("doctor", "Check media toolkit, services and work directory");
  doc_c.add_to(doc);

  // validate
  std::string val_path, val_eov;
  std::size_t val_budget = 0, val_max_images = 0;
  auto* val = app.add_subcommand("validate", "Validate a corpus file");
  val->add_option("corpus", val_path, "Corpus file")->required();
  val->add_option("--eov", val_eov, "Expected end-of-video token");
  val->add_option("--budget", val_budget, "Token budget to enforce");
  val->add_option("--max-images", val_max_images, "Image limit to enforce");

  // mock-server
  std::string ms_fixtures, ms_host = "127.0.0.1", ms_token;
  int ms_port = 8765;
  auto* ms = app.add_subcommand("mock-server", "Serve the mock services over HTTP");
  ms->add_option("--fixtures", ms_fixtures, "Fixture table directory");
  ms->add_option("--host", ms_host, "Bind address");
  ms->add_option("--port", ms_port, "Port (0 picks a free one)");
  ms->add_option("--token", ms_token, "Required bearer token (default: $SERVICE_TOKEN)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    if (run_mock) run_c.patch["services"] = json{{"mode", "mock"}};
    return run_stage(run_c, run_stage_name);
  }
  if (col->parsed()) {
    if (!col_taxonomy.empty()) col_c.patch["inputs"]["taxonomy"] = absolute(col_taxonomy);
    if (!col_backend.empty()) {
      col_c.patch["inputs"]["search_backend"] =
          col_backend.rfind("fixture:", 0) == 0 ? "fixture:" + absolute(col_backend.substr(8)) : col_backend;
    }
    if (col_top_k > 0) col_c.patch["pipeline"]["top_k_search_results"] = col_top_k;
    return run_stage(col_c, "collect");
  }
  if (vid->parsed()) {
    if (!vid_in.empty()) {
      vid_c.options["upstream_manifest"] = absolute(vid_in);
      if (vid_c.workdir.empty()) vid_c.workdir = fs::absolute(vid_in).parent_path().parent_path().string();
    }
    if (vid_judges > 0) vid_c.options["judges"] = vid_judges;
    return run_stage(vid_c, "video");
  }
  if (clip->parsed()) return run_stage(clip_c, "clip");
  if (frame->parsed()) return run_stage(frame_c, "frame");
  if (assemble->parsed()) {
    if (!asm_strategy.empty()) asm_c.patch["pipeline"]["packing_strategy"] = asm_strategy;
    if (asm_budget > 0) asm_c.patch["pipeline"]["token_budget"] = asm_budget;
    if (asm_max_images > 0) asm_c.patch["pipeline"]["max_images_per_sample"] = asm_max_images;
    if (!asm_eov.empty()) asm_c.patch["pipeline"]["eov_token"] = asm_eov;
    return run_stage(asm_c, "assemble");
  }
  if (doc->parsed()) {
    vtb_session* session = nullptr;
    if (auto rc = open_session(doc_c, &session)) return *rc;
    char* report = nullptr;
    const auto s = vtb_doctor(session, &report);
    bool ok = false;
    if (report) ok = json::parse(report).value("ok", false);
    print_json(report);
    vtb_session_close(session);
    if (s != VTB_OK) return report_error(s);
    return ok ? kExitOk : kExitStage;
  }
  if (met->parsed()) {
    json o = json::object();
    std::string corpus = met_corpus;
    if (corpus.empty() && met_cmd != "adapt") {
      const char* env = std::getenv("WORKDIR");
      const std::string wd = !met_c.workdir.empty() ? met_c.workdir : (env && *env ? env : "work");
      corpus = (fs::path(wd) / "corpus.jsonl").string();
    }
    if (corpus.empty()) {
      std::cerr << "metrics adapt needs --corpus <input file>\n";
      return kExitConfig;
    }
    o["corpus"] = corpus;
    if (!met_out.empty()) o["out"] = met_out;
    if (!met_csv.empty()) o["csv"] = met_csv;
    if (met_cmd == "shuffle") o["p"] = met_p;
    if (met_seed) o["seed"] = *met_seed;
    if (!met_format.empty()) o["format"] = met_format;

    vtb_session* session = nullptr;
    if (!met_c.config.empty()) {
      if (auto rc = open_session(met_c, &session)) return *rc;
    }
    char* report = nullptr;
    const std::string text = o.dump();
    const auto s = vtb_metrics_run(session, met_cmd.c_str(), text.c_str(), &report);
    print_json(report);
    vtb_session_close(session);
    return s == VTB_OK ? kExitOk : report_error(s);
  }
  if (val->parsed()) {
    json o = json::object();
    if (!val_eov.empty()) o["eov_token"] = val_eov;
    if (val_budget > 0) o["token_budget"] = val_budget;
    if (val_max_images > 0) o["max_images"] = val_max_images;
    char* report = nullptr;
    const std::string text = o.dump();
    const auto s = vtb_validate_corpus(val_path.c_str(), text.c_str(), &report);
    if (s != VTB_OK) return report_error(s);
    const bool clean = json::parse(report).value("n_violations", 1) == 0;
    print_json(report);
    return clean ? kExitOk : kExitStage;
  }
  if (ms->parsed()) {
    if (ms_token.empty()) {
      const char* env = std::getenv("SERVICE_TOKEN");
      if (env) ms_token = env;
    }
    vtb_mock_server* server = nullptr;
    int port = 0;
    const auto s = vtb_mock_server_start(ms_fixtures.c_str(), ms_host.c_str(), ms_port,
                                         ms_token.empty() ? nullptr : ms_token.c_str(), &server, &port);
    if (s != VTB_OK) return report_error(s);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on http://" << ms_host << ":" << port << std::endl;
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    vtb_mock_server_stop(server);
    return kExitOk;
  }
  return kExitOk;
}
