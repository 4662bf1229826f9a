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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/json_io.hpp"
#include "core/media.hpp"
#include "core/services.hpp"

namespace vtb {

inline constexpr const char* kStages[] = {"collect", "video", "clip", "frame", "assemble", "metrics"};

struct StageReport {
  std::string stage;
  std::size_t items = 0;
  std::size_t skipped = 0;  // already complete with the same input hash
  std::size_t kept = 0;
  std::size_t dropped = 0;
  std::size_t pending = 0;
  std::size_t failed = 0;
  std::vector<std::string> failed_keys;
  std::vector<std::string> pending_keys;
  json summary = json::object();

  bool ok() const { return failed == 0; }
};

json report_to_json(const StageReport& r);

struct PipelineOptions {
  // Use only the first N configured judges in the video stage.
  std::optional<std::size_t> judges;
  // Upstream manifest to read instead of <workdir>/manifests/<prev>.jsonl.
  std::optional<std::filesystem::path> upstream_manifest;
};

// Runs the stages over a work directory:
//
//   manifests/<stage>.jsonl   completed items, one record per line
//   <stage>/drops.jsonl       every exclusion with its reason
//   pending/<stage>.jsonl     items left pending by the last run
//   logs/<stage>.jsonl        one line per item transition
//   collect/ audio/ video/ clip/ frames/ frame/   per-item outputs
//   corpus.jsonl              assembled corpus
//   metrics/                  reports
//
// Items of a stage are computed on a worker pool and committed to the
// manifest in input order. Setting VTB_CRASH_AFTER=<stage>:<n> terminates the
// process after n commits of that stage, once the next item's outputs exist
// but before its manifest record is written.
class Pipeline {
 public:
  Pipeline(AppConfig cfg, std::filesystem::path workdir, PipelineOptions opts = {},
           std::shared_ptr<Services> services = nullptr,
           std::shared_ptr<MediaToolkit> media = nullptr);
  ~Pipeline();

  // `stage` is one of kStages or "all". Throws ArgumentError for an unknown name.
  std::vector<StageReport> run(const std::string& stage);
  StageReport run_stage(const std::string& stage);

  // {"ok": bool, "checks": [{"name", "status": ok|warn|fail, "detail"}]}
  json doctor();

  const AppConfig& config() const { return cfg_; }
  const std::filesystem::path& workdir() const { return workdir_; }
  Services& services() { return *services_; }
  // Workdir-relative references resolve against the workdir.
  std::filesystem::path resolve(const std::string& ref) const;

 private:
  struct Impl;
  AppConfig cfg_;
  std::filesystem::path workdir_;
  PipelineOptions opts_;
  std::shared_ptr<Services> services_;
  std::shared_ptr<MediaToolkit> media_;
  std::unique_ptr<Impl> impl_;
};

// Builds the configured services (mock or HTTP).
std::shared_ptr<Services> make_services(const AppConfig& cfg);

}  // namespace vtb
