// Copyright 2026 The TangentLab Authors
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

// Runs the command-line binary and checks exit codes and outputs.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + TANGENTLAB_CLI + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tangentlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(Cli, PassWritesJsonAndCsv) {
  const auto json = dir_ / "c.json", csv = dir_ / "c.csv";
  EXPECT_EQ(run("cantor --depth 8 --centers 10 --points 3 --out " + json.string() + " --csv " + csv.string()), 0);
  const auto j = nlohmann::json::parse(slurp(json));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["config"]["depth"], "8");
  EXPECT_EQ(slurp(csv).rfind("claim,k,value,bound,slack,pass\n", 0), 0u);
}

TEST_F(Cli, CheckFailureExitsOne) {
  EXPECT_EQ(run("asymptotic --Rk 1,2,4"), 1);
  EXPECT_EQ(run("cantor --depth 8 --c1 1.5 --centers 5 --points 2"), 1);
}

TEST_F(Cli, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("norms --bogus 1"), 2);
  EXPECT_EQ(run("norms --tol -1"), 2);
  EXPECT_EQ(run("cantor --depth 40"), 2);
  EXPECT_EQ(run("cantor --config " + (dir_ / "missing.cfg").string()), 2);
  EXPECT_EQ(run("cantor --depth 6 --centers 4 --points 2 --out /nonexistent/dir/x.json"), 2);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "# cantor run\ndepth = 9\ncenters = 6\npoints = 2\n";
  const auto json = dir_ / "o.json";
  EXPECT_EQ(run("cantor --config " + cfg.string() + " --depth 7 --out " + json.string()), 0);
  const auto j = nlohmann::json::parse(slurp(json));
  EXPECT_EQ(j["config"]["depth"], "7");
  EXPECT_EQ(j["config"]["centers"], "6");
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  EXPECT_EQ(run("cantor --depth 8 --centers 4 --points 2", "TANGENTLAB_OUT=" + (dir_ / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "cantor.json"));
}

TEST_F(Cli, HelpAndVersion) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("--version"), 0);
  EXPECT_EQ(run("weights --help"), 0);
}

}  // namespace
