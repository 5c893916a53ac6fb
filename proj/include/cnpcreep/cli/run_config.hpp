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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnpcreep/baselines/gaussian_process.hpp"
#include "cnpcreep/baselines/pooled.hpp"
#include "cnpcreep/cnp/cnp.hpp"
#include "cnpcreep/data/records.hpp"
#include "cnpcreep/data/split.hpp"
#include "cnpcreep/data/synthetic.hpp"
#include "cnpcreep/eval/experiment.hpp"

namespace cnpcreep::cli {

struct PlotSettings {
  bool enabled = true;
  std::size_t grid_points = 50;
  double log10_stress_margin = 0.2;  ///< grid extends this far past the task's stresses
  double band_multiplier = 2.0;
};

/// Everything a run depends on. The global seed drives the split, both
/// trainers and the evaluation; a synthetic data source keeps its own seed so
/// the dataset does not change with --seed.
struct RunConfig {
  std::optional<std::filesystem::path> csv;
  data::CsvSchema schema;
  std::optional<data::SyntheticTaskConfig> synthetic;

  data::SplitSpec split;
  cnp::CnpConfig cnp;
  cnp::EpisodeConfig episodes;
  baselines::PooledConfig pooled;
  baselines::GpGrid gp_grid = baselines::GpGrid::defaults();
  double c_lm = 20.0;
  eval::EvalProtocol eval;
  std::vector<std::string> models{"cnp", "pooled", "lm1", "lm2", "lm3", "gp"};
  PlotSettings plot;

  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  bool strict = false;

  /// Pushes the global seed into the split, trainers and evaluation.
  void apply_seed();
  void validate() const;
};

/// Sets `dotted.key` in a JSON document, creating objects on the way. The
/// value is parsed as JSON when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& dotted_key, const std::string& value);

/// Reads a JSON config file; ConfigError if unreadable or malformed.
nlohmann::json load_config_json(const std::filesystem::path& path);

/// Builds and validates a RunConfig. Unknown top-level keys are rejected.
RunConfig parse_run_config(const nlohmann::json& doc);

nlohmann::json to_json(const RunConfig& c);

/// Model names: cnp, pooled, gp, lm<d> with d >= 1.
bool is_known_model(const std::string& name);

}  // namespace cnpcreep::cli
