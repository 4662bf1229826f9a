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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kFixtures = VTB_FIXTURES_DIR;
const fs::path kCli = VTB_CLI_PATH;

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const auto log = fs::temp_directory_path() / "vtb_cli_test.out";
  const std::string cmd = "'" + kCli.string() + "' " + args + " >'" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream os;
  os << in.rdbuf();
  r.out = os.str();
  return r;
}

fs::path fresh(const char* name) {
  auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("a missing config key exits 2 and names the key") {
  auto dir = fresh("vtb_cli_cfg");
  std::ofstream(dir / "c.json") << R"({"services":{"mode":"mock"},"inputs":{"search_backend":"fixture:x"}})";
  auto r = run("run all --config '" + (dir / "c.json").string() + "' --workdir '" + (dir / "w").string() + "'");
  CHECK(r.code == 2);
  CHECK(r.out.find("inputs.taxonomy") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("frobnicate").code == 2);
  CHECK(run("run all").code == 2);
}

TEST_CASE("stage commands, validation and metrics") {
  auto wd = fresh("vtb_cli_run");
  const std::string common = "--config '" + (kFixtures / "config.json").string() + "' --workdir '" + wd.string() + "'";
  auto r = run("collect " + common);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["stages"][0]["kept"] == 6);
  CHECK(run("video-stage " + common).code == 0);
  CHECK(run("clip-stage " + common).code == 0);
  CHECK(run("frame-stage " + common).code == 0);
  CHECK(run("assemble " + common).code == 0);

  const auto corpus = (wd / "corpus.jsonl").string();
  r = run("validate '" + corpus + "'");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["n_violations"] == 0);

  r = run("metrics stats --corpus '" + corpus + "'");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["n_samples"] == 2);

  r = run("metrics shuffle --corpus '" + corpus + "' --out '" + (wd / "s.jsonl").string() + "' --p 2");
  CHECK(r.code == 2);

  r = run("doctor " + common);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["ok"] == true);
}

TEST_CASE("validate exits 1 on an invalid corpus") {
  auto dir = fresh("vtb_cli_bad");
  std::ofstream(dir / "c.jsonl") << "{\"sample_id\":\"x\"}\n";
  CHECK(run("validate '" + (dir / "c.jsonl").string() + "'").code == 1);
}
