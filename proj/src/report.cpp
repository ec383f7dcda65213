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

#include "tangentlab/report.hpp"

#include <unistd.h>

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "tangentlab/errors.hpp"

namespace tangentlab {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_plain(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
  if (used != t.size()) throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  return v;
}

// Accepts plain numbers, p/q and b^e (e.g. 2^-10).
double parse_number(const std::string& text, const std::string& key) {
  if (const auto pos = text.find('^'); pos != std::string::npos) {
    return std::pow(parse_plain(text.substr(0, pos), key), parse_plain(text.substr(pos + 1), key));
  }
  if (const auto pos = text.find('/'); pos != std::string::npos) {
    return parse_plain(text.substr(0, pos), key) / parse_plain(text.substr(pos + 1), key);
  }
  return parse_plain(text, key);
}

nlohmann::json number_json(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

double number_from(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return NAN;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string plain17(double x) {
  const std::string s = detail::format17(x);
  return s.front() == '"' ? s.substr(1, s.size() - 2) : s;
}

}  // namespace

CheckRecord CheckRecord::at_most(std::string claim, int k, double value, double bound) {
  CheckRecord r{std::move(claim), k, value, bound, bound - value, false, "le"};
  r.pass = r.slack >= 0.0;
  return r;
}

CheckRecord CheckRecord::at_least(std::string claim, int k, double value, double bound) {
  CheckRecord r{std::move(claim), k, value, bound, value - bound, false, "ge"};
  r.pass = r.slack >= 0.0;
  return r;
}

bool Report::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["experiment"] = experiment;
  j["config"] = config;
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) {
    cs.push_back({{"claim", c.claim},
                  {"k", c.k},
                  {"value", number_json(c.value)},
                  {"bound", number_json(c.bound)},
                  {"slack", number_json(c.slack)},
                  {"pass", c.pass},
                  {"relation", c.relation}});
  }
  j["checks"] = cs;
  nlohmann::json ms = nlohmann::json::object();
  for (const auto& [k, v] : metrics) ms[k] = number_json(v);
  j["metrics"] = ms;
  j["notes"] = notes;
  nlohmann::json wc = nlohmann::json::object();
  for (const auto& [k, v] : wall_clock) wc[k] = v;
  j["wall_clock"] = wc;
  j["passed"] = passed();
  std::size_t failed = 0;
  for (const auto& c : checks) failed += c.pass ? 0 : 1;
  j["failed_checks"] = failed;
  j["total_checks"] = checks.size();
  return detail::dump17(j) + "\n";
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "claim,k,value,bound,slack,pass\n";
  for (const auto& c : checks) {
    os << csv_field(c.claim) << ',' << c.k << ',' << plain17(c.value) << ',' << plain17(c.bound) << ','
       << plain17(c.slack) << ',' << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

Report Report::from_json(const std::string& text) {
  Report r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.experiment = j.at("experiment").get<std::string>();
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    for (const auto& c : j.at("checks")) {
      CheckRecord rec;
      rec.claim = c.at("claim").get<std::string>();
      rec.k = c.at("k").get<int>();
      rec.value = number_from(c.at("value"));
      rec.bound = number_from(c.at("bound"));
      rec.slack = number_from(c.at("slack"));
      rec.pass = c.at("pass").get<bool>();
      rec.relation = c.at("relation").get<std::string>();
      r.checks.push_back(std::move(rec));
    }
    for (const auto& [k, v] : j.at("metrics").items()) r.metrics[k] = number_from(v);
    r.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("wall_clock").items()) r.wall_clock[k] = v.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report: malformed JSON: ") + e.what());
  }
  return r;
}

bool Report::same_content(const Report& o) const {
  const auto same_metrics = [&] {
    if (metrics.size() != o.metrics.size()) return false;
    for (const auto& [k, v] : metrics) {
      const auto it = o.metrics.find(k);
      if (it == o.metrics.end()) return false;
      if (!(it->second == v || (std::isnan(v) && std::isnan(it->second)))) return false;
    }
    return true;
  };
  return experiment == o.experiment && config == o.config && checks == o.checks && same_metrics() &&
         notes == o.notes;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move report into '" + path + "'");
  }
}

void write_report(const Report& report, const std::string& path, const std::string& format) {
  if (format == "json") {
    write_text_atomic(path, report.to_json());
  } else if (format == "csv") {
    write_text_atomic(path, report.to_csv());
  } else {
    throw ConfigError("unknown report format '" + format + "'");
  }
}

// ---------------------------------------------------------------------------
// ExperimentConfig

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

void ExperimentConfig::merge(const ExperimentConfig& over) {
  for (const auto& [k, v] : over.values_) values_[k] = v;
}

std::string ExperimentConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: missing key '" + key + "'");
  return it->second;
}

long long ExperimentConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError("config: '" + key + "' expects an integer");
  return static_cast<long long>(v);
}

double ExperimentConfig::get_double(const std::string& key) const { return parse_number(get(key), key); }

bool ExperimentConfig::get_bool(const std::string& key) const {
  const auto v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean");
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(item, key));
  }
  if (out.empty()) throw ConfigError("config: '" + key + "' expects a comma-separated list");
  return out;
}

std::vector<long long> ExperimentConfig::get_ints(const std::string& key) const {
  std::vector<long long> out;
  for (const double v : get_doubles(key)) {
    if (v != std::floor(v)) throw ConfigError("config: '" + key + "' expects integers");
    out.push_back(static_cast<long long>(v));
  }
  return out;
}

std::vector<std::string> ExperimentConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::istringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!trim(item).empty()) out.emplace_back(trim(item));
  }
  return out;
}

std::uint64_t ExperimentConfig::seed() const {
  const long long s = get_int("seed");
  if (s < 0) throw ConfigError("config: seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

void ExperimentConfig::apply_defaults(const std::map<std::string, std::string>& defaults) {
  for (const auto& [k, v] : values_) {
    if (defaults.count(k) == 0) throw ConfigError("config: unknown key '" + k + "'");
  }
  for (const auto& [k, v] : defaults) values_.emplace(k, v);
}

void ExperimentConfig::validate_tolerances() const {
  for (const auto& [k, v] : values_) {
    if (k.find("tol") == std::string::npos) continue;
    if (!(get_double(k) > 0.0)) throw ConfigError("config: tolerance '" + k + "' must be positive");
  }
}

}  // namespace tangentlab
