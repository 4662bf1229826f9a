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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vtb/vtb.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kFixtures = VTB_FIXTURES_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json take(char* s) {
  REQUIRE(s != nullptr);
  auto j = json::parse(s);
  vtb_string_free(s);
  return j;
}

fs::path fresh(const char* name) {
  auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

const std::string kConfig = (kFixtures / "config.json").string();

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(vtb_version()) == "0.1.0");
  CHECK(std::string(vtb_status_name(VTB_ERR_CONFIG)) == "config");
  CHECK(std::string(vtb_status_name(VTB_OK)) == "ok");
}

TEST_CASE("opening a session reports config errors with the key") {
  vtb_session* s = nullptr;
  CHECK(vtb_session_open("/nonexistent/config.json", nullptr, nullptr, &s) == VTB_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::string(vtb_last_error_message()).size() > 0);

  const auto wd = fresh("vtb_capi_badcfg");
  CHECK(vtb_session_open(kConfig.c_str(), wd.c_str(), R"({"config":{"inputs":{"taxonomy":null}}})", &s) ==
        VTB_ERR_CONFIG);
  CHECK(std::string(vtb_last_error_key()) == "inputs.taxonomy");
  CHECK(vtb_session_open(kConfig.c_str(), wd.c_str(), "{not json", &s) == VTB_ERR_VALIDATION);
  CHECK(vtb_session_open(kConfig.c_str(), wd.c_str(), nullptr, nullptr) == VTB_ERR_ARGUMENT);
}

TEST_CASE("running the pipeline and metrics through the C interface") {
  const auto wd = fresh("vtb_capi_run");
  vtb_session* s = nullptr;
  REQUIRE(vtb_session_open(kConfig.c_str(), wd.c_str(), nullptr, &s) == VTB_OK);
  char* out = nullptr;
  REQUIRE(vtb_run_stage(s, "all", &out) == VTB_OK);
  auto report = take(out);
  CHECK(report["ok"] == true);
  CHECK(report["stages"].size() == 6);
  CHECK(slurp(wd / "corpus.jsonl") == slurp(kFixtures / "golden" / "corpus.jsonl"));

  CHECK(vtb_run_stage(s, "bogus", &out) == VTB_ERR_ARGUMENT);

  const auto corpus = (wd / "corpus.jsonl").string();
  REQUIRE(vtb_metrics_run(nullptr, "stats", json{{"corpus", corpus}}.dump().c_str(), &out) == VTB_OK);
  auto stats = take(out);
  CHECK(stats["n_samples"] == 2);

  REQUIRE(vtb_metrics_run(s, "insi-sim", json{{"corpus", corpus}}.dump().c_str(), &out) == VTB_OK);
  auto insi = take(out);
  CHECK(insi.contains("overall_avg"));

  CHECK(vtb_metrics_run(nullptr, "ppl", json{{"corpus", corpus}}.dump().c_str(), &out) == VTB_ERR_ARGUMENT);
  REQUIRE(vtb_metrics_run(s, "ppl", json{{"corpus", corpus}}.dump().c_str(), &out) == VTB_OK);
  CHECK(take(out)["mean_ppl"].get<double>() > 1.0);

  const auto shuffled = (wd / "shuffled.jsonl").string();
  REQUIRE(vtb_metrics_run(nullptr, "shuffle",
                          json{{"corpus", corpus}, {"out", shuffled}, {"p", 1.0}, {"seed", 3}}.dump().c_str(),
                          &out) == VTB_OK);
  CHECK(take(out)["n_selected"] == 2);
  CHECK(vtb_metrics_run(nullptr, "shuffle", json{{"corpus", corpus}, {"out", shuffled}, {"p", 0}}.dump().c_str(),
                        &out) == VTB_ERR_ARGUMENT);

  REQUIRE(vtb_validate_corpus(corpus.c_str(), R"({"token_budget":160,"max_images":8})", &out) == VTB_OK);
  CHECK(take(out)["n_violations"] == 0);
  REQUIRE(vtb_validate_corpus(corpus.c_str(), R"({"token_budget":10})", &out) == VTB_OK);
  CHECK(take(out)["n_violations"].get<int>() > 0);

  REQUIRE(vtb_doctor(s, &out) == VTB_OK);
  CHECK(take(out)["ok"] == true);
  vtb_session_close(s);
}

TEST_CASE("ssim through the C interface") {
  uint8_t black[64] = {0};
  uint8_t white[64];
  for (auto& p : white) p = 255;
  double v = 0;
  REQUIRE(vtb_compute_ssim(black, white, 8, 8, &v) == VTB_OK);
  const double c1 = (0.01 * 255) * (0.01 * 255);
  CHECK(v == doctest::Approx(c1 / (255.0 * 255.0 + c1)).epsilon(1e-9));
  CHECK(vtb_compute_ssim(black, white, 0, 8, &v) == VTB_ERR_ARGUMENT);
}

TEST_CASE("http services against the mock server reproduce the golden corpus") {
  vtb_mock_server* server = nullptr;
  int port = 0;
  const auto fixtures = (kFixtures / "services").string();
  REQUIRE(vtb_mock_server_start(fixtures.c_str(), "127.0.0.1", 0, nullptr, &server, &port) == VTB_OK);
  REQUIRE(port > 0);

  const auto wd = fresh("vtb_capi_http");
  const json overrides = {
      {"config", {{"services", {{"mode", "http"}, {"base_url", "http://127.0.0.1:" + std::to_string(port)},
                                {"retry_base_ms", 1}}}}}};
  vtb_session* s = nullptr;
  REQUIRE(vtb_session_open(kConfig.c_str(), wd.c_str(), overrides.dump().c_str(), &s) == VTB_OK);
  char* out = nullptr;
  const auto status = vtb_run_stage(s, "all", &out);
  CAPTURE(vtb_last_error_message());
  REQUIRE(status == VTB_OK);
  vtb_string_free(out);
  CHECK(slurp(wd / "corpus.jsonl") == slurp(kFixtures / "golden" / "corpus.jsonl"));
  vtb_session_close(s);
  vtb_mock_server_stop(server);
}

TEST_CASE("the mock server rejects clients without the token") {
  vtb_mock_server* server = nullptr;
  int port = 0;
  const auto fixtures = (kFixtures / "services").string();
  REQUIRE(vtb_mock_server_start(fixtures.c_str(), "127.0.0.1", 0, "sekrit", &server, &port) == VTB_OK);
  const auto wd = fresh("vtb_capi_auth");
  const json overrides = {
      {"config", {{"services", {{"mode", "http"}, {"base_url", "http://127.0.0.1:" + std::to_string(port)},
                                {"retry_base_ms", 1}}}}}};
  vtb_session* s = nullptr;
  REQUIRE(vtb_session_open(kConfig.c_str(), wd.c_str(), overrides.dump().c_str(), &s) == VTB_OK);
  char* out = nullptr;
  CHECK(vtb_run_stage(s, "all", &out) == VTB_ERR_STAGE);
  auto report = take(out);
  CHECK(report["ok"] == false);
  vtb_session_close(s);
  vtb_mock_server_stop(server);
}
