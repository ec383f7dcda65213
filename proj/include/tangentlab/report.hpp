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

// Experiment configuration and check reports.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tangentlab {

/// One verified claim. `relation` is "le" (value <= bound) or "ge"
/// (value >= bound); slack is signed so that pass == (slack >= 0).
struct CheckRecord {
  std::string claim;
  int k = -1;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
  std::string relation = "le";

  static CheckRecord at_most(std::string claim, int k, double value, double bound);
  static CheckRecord at_least(std::string claim, int k, double value, double bound);

  bool operator==(const CheckRecord&) const = default;
};

struct Report {
  std::string experiment;
  std::map<std::string, std::string> config;
  std::vector<CheckRecord> checks;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  std::map<std::string, double> wall_clock;  // seconds; excluded from equality

  bool passed() const;
  void add(CheckRecord record) { checks.push_back(std::move(record)); }

  std::string to_json() const;
  /// CSV with columns claim,k,value,bound,slack,pass.
  std::string to_csv() const;
  static Report from_json(const std::string& text);

  /// Equality of everything except wall-clock fields.
  bool same_content(const Report& other) const;
};

/// Writes atomically (temporary file, then rename). format is "json" or "csv".
void write_report(const Report& report, const std::string& path, const std::string& format);
void write_text_atomic(const std::string& path, const std::string& text);

/// Key/value configuration. Text form: one `key = value` per line, `#`
/// starts a comment.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;
  explicit ExperimentConfig(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  static ExperimentConfig parse(const std::string& text);
  /// Keys of `over` replace keys of this config.
  void merge(const ExperimentConfig& over);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key) const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<long long> get_ints(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::uint64_t seed() const;

  /// Fills missing keys from `defaults` and rejects keys not present there.
  void apply_defaults(const std::map<std::string, std::string>& defaults);
  /// Rejects non-positive tolerances (keys containing "tol").
  void validate_tolerances() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace tangentlab
