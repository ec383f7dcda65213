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

// Command-line front-end. Links only the C API.
//
// Exit codes: 0 every check passed, 1 a check failed, 2 usage, config or I/O
// error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tangentlab/tangentlab.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct CString {
  char* p = nullptr;
  ~CString() { tl_string_free(p); }
};

struct Subcommand {
  std::string name;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;  // only keys given on the command line
  std::vector<std::string> keys;
  std::string config_path;
  std::string out_path;
  std::string csv_path;
};

int report_error(const std::string& what) {
  std::cerr << "tangentlab: " << what << "\n";
  return kExitError;
}

int report_status(tl_status s) {
  return report_error(std::string(tl_status_name(s)) + " error: " + tl_last_error());
}

std::vector<std::pair<std::string, std::string>> defaults_of(const std::string& name) {
  CString text;
  if (tl_experiment_defaults(name.c_str(), &text.p) != TL_OK) return {};
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text.p);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

int run(Subcommand& sub) {
  std::string config;
  if (!sub.config_path.empty()) {
    std::ifstream in(sub.config_path);
    if (!in) return report_error("cannot read config file '" + sub.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    config = ss.str() + "\n";
  }
  for (const auto& [k, v] : sub.values) config += k + " = " + v + "\n";

  CString json;
  int passed = 0;
  if (const auto s = tl_run_experiment(sub.name.c_str(), config.c_str(), &json.p, &passed); s != TL_OK) {
    return report_status(s);
  }

  std::string out = sub.out_path;
  if (out.empty()) {
    if (const char* dir = std::getenv("TANGENTLAB_OUT"); dir != nullptr && *dir != '\0') {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      out = (std::filesystem::path(dir) / (sub.name + ".json")).string();
    }
  }
  if (out.empty()) {
    std::cout << json.p << "\n";
  } else if (const auto s = tl_report_write(json.p, out.c_str(), "json"); s != TL_OK) {
    return report_status(s);
  }
  if (!sub.csv_path.empty()) {
    if (const auto s = tl_report_write(json.p, sub.csv_path.c_str(), "csv"); s != TL_OK) return report_status(s);
  }
  std::cerr << sub.name << ": " << (passed ? "PASS" : "FAIL") << "\n";
  return passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for tangents of weighted planes, grids and fat Cantor squares"};
  app.set_version_flag("--version", std::string(tl_version()));
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Subcommand>> subs;
  for (std::size_t i = 0; i < tl_experiment_count(); ++i) {
    auto sub = std::make_unique<Subcommand>();
    sub->name = tl_experiment_name(i);
    sub->app = app.add_subcommand(sub->name, tl_experiment_summary(i));
    sub->app->set_help_flag("--help", "Print this help message and exit");
    sub->app->add_option("--config", sub->config_path, "key = value file; flags override it")
        ->check(CLI::ExistingFile);
    sub->app->add_option("--out", sub->out_path, "JSON report path (default: stdout or $TANGENTLAB_OUT)");
    sub->app->add_option("--csv", sub->csv_path, "CSV path with columns claim,k,value,bound,slack,pass");
    for (const auto& [key, def] : defaults_of(sub->name)) {
      auto* target = sub.get();
      const std::string k = key;
      sub->app->add_option_function<std::string>(
          "--" + key, [target, k](const std::string& v) { target->values[k] = v; }, "default: " + def);
    }
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }
  for (auto& sub : subs) {
    if (sub->app->parsed()) return run(*sub);
  }
  return kExitError;
}
