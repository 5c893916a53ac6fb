// Copyright 2026 The cnpcreep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic creep families with known ground truth.
//
// Linear mode: each task draws, per temperature level T, a line
//   log10 t_r = a_T * log10 sigma + b_T + eps,   eps ~ N(0, noise^2), a_T < 0
// with a task-level slope/intercept shared across levels plus per-level
// jitter, and intercepts falling linearly with temperature.
//
// Larson-Miller mode: each task draws a degree-1 master curve
//   P_LM = xi0 + xi1 * log10 sigma,  xi1 < 0
// and rupture times follow by inverting the Larson-Miller parameter, with the
// same additive noise on log10 t_r.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnpcreep/data/records.hpp"

namespace cnpcreep::data {

enum class SyntheticMode { linear, larson_miller };

struct SyntheticTaskConfig {
  SyntheticMode mode = SyntheticMode::linear;
  std::size_t task_count = 270;
  std::size_t points_min = 13;
  std::size_t points_max = 40;
  std::vector<double> temperatures_c{450.0, 500.0, 550.0, 600.0, 650.0};
  double stress_min_mpa = 50.0;
  double stress_max_mpa = 500.0;
  double noise_std = 0.1;

  // linear mode
  double slope_mean = -4.0;
  double slope_sd = 0.5;
  double slope_level_sd = 0.2;
  double intercept_mean = 12.0;
  double intercept_sd = 0.5;
  double intercept_level_sd = 0.1;
  double intercept_per_100c = -1.5;
  double reference_temp_c = 550.0;

  // larson_miller mode
  double lm_xi0_mean = 45.0;
  double lm_xi0_sd = 1.0;
  double lm_xi1_mean = -6.0;
  double lm_xi1_sd = 0.3;
  double c_lm = 20.0;

  std::uint64_t seed = 0;

  void validate() const;
};

struct LevelLine {
  double temp_c;
  double slope;
  double intercept;
};

struct TaskTruth {
  std::string cast_code;
  std::vector<LevelLine> lines;  ///< linear mode
  std::vector<double> lm_xi;     ///< larson_miller mode
};

struct SyntheticFamily {
  std::vector<TaskDataset> tasks;
  std::vector<TaskTruth> truth;  ///< parallel to tasks
};

/// Fully determined by the config (including its seed).
SyntheticFamily synth_family(const SyntheticTaskConfig& cfg);

std::vector<TaskDataset> synth_tasks(const SyntheticTaskConfig& cfg);

/// Generating parameters plus per-task ground truth.
nlohmann::json synthetic_manifest(const SyntheticTaskConfig& cfg, const SyntheticFamily& family);

void to_json(nlohmann::json& j, const SyntheticTaskConfig& c);
void from_json(const nlohmann::json& j, SyntheticTaskConfig& c);

}  // namespace cnpcreep::data
