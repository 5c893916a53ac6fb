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

#include "cnpcreep/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cnpcreep/baselines/larson_miller.hpp"
#include "cnpcreep/error.hpp"
#include "cnpcreep/random.hpp"

namespace cnpcreep::data {

void SyntheticTaskConfig::validate() const {
  if (!(noise_std >= 0.0)) throw ConfigError("synthetic: noise_std must be >= 0");
  if (points_min < 3) throw ConfigError("synthetic: points_min must be at least 3");
  if (points_max < points_min) throw ConfigError("synthetic: points_max must be >= points_min");
  if (temperatures_c.empty()) throw ConfigError("synthetic: need at least one temperature level");
  for (double t : temperatures_c) {
    if (!(t > -273.15)) throw ConfigError("synthetic: temperature levels must exceed -273.15 C");
  }
  if (!(stress_min_mpa > 0.0) || !(stress_max_mpa >= stress_min_mpa)) {
    throw ConfigError("synthetic: need 0 < stress_min_mpa <= stress_max_mpa");
  }
  if (slope_sd < 0.0 || slope_level_sd < 0.0 || intercept_sd < 0.0 || intercept_level_sd < 0.0 || lm_xi0_sd < 0.0 ||
      lm_xi1_sd < 0.0) {
    throw ConfigError("synthetic: spreads must be >= 0");
  }
}

namespace {
constexpr double kMaxSlope = -0.1;

std::string cast_code_for(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "SYN%05zu", i);
  return buf;
}
}  // namespace

SyntheticFamily synth_family(const SyntheticTaskConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  SyntheticFamily family;
  const double log_lo = std::log10(cfg.stress_min_mpa);
  const double log_hi = std::log10(cfg.stress_max_mpa);
  for (std::size_t i = 0; i < cfg.task_count; ++i) {
    TaskTruth truth{cast_code_for(i), {}, {}};
    if (cfg.mode == SyntheticMode::linear) {
      const double slope = rng.normal(cfg.slope_mean, cfg.slope_sd);
      const double intercept = rng.normal(cfg.intercept_mean, cfg.intercept_sd);
      for (double t : cfg.temperatures_c) {
        const double a = std::min(slope + cfg.slope_level_sd * rng.normal(), kMaxSlope);
        const double b = intercept + cfg.intercept_per_100c * (t - cfg.reference_temp_c) / 100.0 +
                         cfg.intercept_level_sd * rng.normal();
        truth.lines.push_back(LevelLine{t, a, b});
      }
    } else {
      const double xi0 = rng.normal(cfg.lm_xi0_mean, cfg.lm_xi0_sd);
      const double xi1 = std::min(rng.normal(cfg.lm_xi1_mean, cfg.lm_xi1_sd), kMaxSlope);
      truth.lm_xi = {xi0, xi1};
    }

    const auto n = static_cast<std::size_t>(rng.integer(cfg.points_min, cfg.points_max));
    TaskDataset task{truth.cast_code, {}};
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t level = rng.index(cfg.temperatures_c.size());
      const double temp = cfg.temperatures_c[level];
      const double log_stress = rng.uniform(log_lo, log_hi);
      double log_time = 0.0;
      if (cfg.mode == SyntheticMode::linear) {
        log_time = truth.lines[level].slope * log_stress + truth.lines[level].intercept;
      } else {
        const double p_lm = truth.lm_xi[0] + truth.lm_xi[1] * log_stress;
        log_time = 1000.0 * p_lm / baselines::rankine(temp) - cfg.c_lm;
      }
      log_time += cfg.noise_std * rng.normal();
      task.records.push_back(
          CreepRecord{truth.cast_code, "synthetic", std::pow(10.0, log_stress), temp, std::pow(10.0, log_time)});
    }
    family.tasks.push_back(std::move(task));
    family.truth.push_back(std::move(truth));
  }
  return family;
}

std::vector<TaskDataset> synth_tasks(const SyntheticTaskConfig& cfg) { return synth_family(cfg).tasks; }

nlohmann::json synthetic_manifest(const SyntheticTaskConfig& cfg, const SyntheticFamily& family) {
  nlohmann::json tasks = nlohmann::json::array();
  for (std::size_t i = 0; i < family.truth.size(); ++i) {
    const auto& t = family.truth[i];
    nlohmann::json entry{{"cast_code", t.cast_code}, {"records", family.tasks[i].size()}};
    if (cfg.mode == SyntheticMode::linear) {
      nlohmann::json lines = nlohmann::json::array();
      for (const auto& l : t.lines) {
        lines.push_back({{"temp_c", l.temp_c}, {"slope", l.slope}, {"intercept", l.intercept}});
      }
      entry["lines"] = std::move(lines);
    } else {
      entry["lm_xi"] = t.lm_xi;
    }
    tasks.push_back(std::move(entry));
  }
  return nlohmann::json{{"config", cfg}, {"tasks", std::move(tasks)}};
}

void to_json(nlohmann::json& j, const SyntheticTaskConfig& c) {
  j = nlohmann::json{{"mode", c.mode == SyntheticMode::linear ? "linear" : "larson_miller"},
                     {"task_count", c.task_count},
                     {"points_min", c.points_min},
                     {"points_max", c.points_max},
                     {"temperatures_c", c.temperatures_c},
                     {"stress_min_mpa", c.stress_min_mpa},
                     {"stress_max_mpa", c.stress_max_mpa},
                     {"noise_std", c.noise_std},
                     {"slope_mean", c.slope_mean},
                     {"slope_sd", c.slope_sd},
                     {"slope_level_sd", c.slope_level_sd},
                     {"intercept_mean", c.intercept_mean},
                     {"intercept_sd", c.intercept_sd},
                     {"intercept_level_sd", c.intercept_level_sd},
                     {"intercept_per_100c", c.intercept_per_100c},
                     {"reference_temp_c", c.reference_temp_c},
                     {"lm_xi0_mean", c.lm_xi0_mean},
                     {"lm_xi0_sd", c.lm_xi0_sd},
                     {"lm_xi1_mean", c.lm_xi1_mean},
                     {"lm_xi1_sd", c.lm_xi1_sd},
                     {"c_lm", c.c_lm},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, SyntheticTaskConfig& c) {
  SyntheticTaskConfig d;
  const std::string mode = j.value("mode", std::string("linear"));
  if (mode == "linear") {
    c.mode = SyntheticMode::linear;
  } else if (mode == "larson_miller") {
    c.mode = SyntheticMode::larson_miller;
  } else {
    throw ConfigError("synthetic: unknown mode '" + mode + "'");
  }
  c.task_count = j.value("task_count", d.task_count);
  c.points_min = j.value("points_min", d.points_min);
  c.points_max = j.value("points_max", d.points_max);
  c.temperatures_c = j.value("temperatures_c", d.temperatures_c);
  c.stress_min_mpa = j.value("stress_min_mpa", d.stress_min_mpa);
  c.stress_max_mpa = j.value("stress_max_mpa", d.stress_max_mpa);
  c.noise_std = j.value("noise_std", d.noise_std);
  c.slope_mean = j.value("slope_mean", d.slope_mean);
  c.slope_sd = j.value("slope_sd", d.slope_sd);
  c.slope_level_sd = j.value("slope_level_sd", d.slope_level_sd);
  c.intercept_mean = j.value("intercept_mean", d.intercept_mean);
  c.intercept_sd = j.value("intercept_sd", d.intercept_sd);
  c.intercept_level_sd = j.value("intercept_level_sd", d.intercept_level_sd);
  c.intercept_per_100c = j.value("intercept_per_100c", d.intercept_per_100c);
  c.reference_temp_c = j.value("reference_temp_c", d.reference_temp_c);
  c.lm_xi0_mean = j.value("lm_xi0_mean", d.lm_xi0_mean);
  c.lm_xi0_sd = j.value("lm_xi0_sd", d.lm_xi0_sd);
  c.lm_xi1_mean = j.value("lm_xi1_mean", d.lm_xi1_mean);
  c.lm_xi1_sd = j.value("lm_xi1_sd", d.lm_xi1_sd);
  c.c_lm = j.value("c_lm", d.c_lm);
  c.seed = j.value("seed", d.seed);
}

}  // namespace cnpcreep::data
