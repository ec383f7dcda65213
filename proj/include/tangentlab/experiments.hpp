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

// The verification experiments behind the command-line front-end.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tangentlab/geodesic.hpp"
#include "tangentlab/report.hpp"
#include "tangentlab/weight_field.hpp"

namespace tangentlab {

struct ExperimentInfo {
  std::string name;
  std::string summary;
  std::map<std::string, std::string> defaults;  // every accepted key
};

const std::vector<ExperimentInfo>& experiment_catalog();
const ExperimentInfo& experiment_info(const std::string& name);

/// Runs a named experiment. Missing keys take their defaults; unknown keys
/// raise ConfigError.
Report run_experiment(const std::string& name, ExperimentConfig config);

Report run_verify_lemma52(const ExperimentConfig& config);
Report run_blowup(const ExperimentConfig& config);
Report run_asymptotic(const ExperimentConfig& config);
Report run_cantor(const ExperimentConfig& config);
Report run_weights(const ExperimentConfig& config);
Report run_geodesic(const ExperimentConfig& config);
Report run_norms(const ExperimentConfig& config);

/// Final weight from a schedule file, or the a priori schedule when empty.
WeightField final_weight(const std::string& schedule_path, int k_max);

/// Blow-up of the weighted plane at the origin with r_k = 1/(k 2^k), R_k = k.
struct BlowupResult {
  int k = 0;
  double r = 0.0;
  double R = 0.0;
  double epsilon = 0.0;        // sup |d - |.|_1| / r over sampled pairs
  double epsilon_bound = 0.0;  // k / 2^k
  double tolerance = 0.0;      // solver tolerance / r
  double coverage_gap = 0.0;
  double coverage_pitch = 0.0;
  std::size_t window_size = 0;
  std::size_t pair_count = 0;
  double spacing = 0.0;
  // Normalized measures of sets in blow-up coordinates, one-sided.
  double cube_mass_upper = 0.0;  // mu_k([-1,1]^2)
  double disc_mass_upper = 0.0;  // mu_k(B_1)
  double small_disc_mass_lower = 0.0;  // mu_k(B_delta)
  double delta = 0.5;
};

struct BlowupOptions {
  std::size_t cells = 512;       // lattice cells per side of N_k
  std::size_t sources = 16;
  std::size_t measure_samples = 256;  // per axis
  double delta = 0.5;
  std::uint64_t seed = 1;
};

BlowupResult blowup_at_scale(int k, const WeightField& rho, const BlowupOptions& options = {});

}  // namespace tangentlab
