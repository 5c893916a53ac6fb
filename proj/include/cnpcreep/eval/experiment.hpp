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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnpcreep/data/records.hpp"
#include "cnpcreep/eval/metrics.hpp"
#include "cnpcreep/eval/predictors.hpp"

namespace cnpcreep::eval {

struct EvalProtocol {
  /// Context size per task is max(ceil(context_fraction * n), context_min)
  /// unless `context_size` fixes it.
  double context_fraction = 1.0 / 3.0;
  std::size_t context_min = 3;
  std::optional<std::size_t> context_size;
  std::size_t runs = 20;
  std::uint64_t base_seed = 0;
  double interval_multiplier = kP95Multiplier;

  void validate() const;
};

/// Throws ConfigError naming the cast code if no target would remain.
std::size_t context_size_for(const data::TaskDataset& task, const EvalProtocol& protocol);

/// Context/target partition of one task in one run.
struct TaskSplit {
  std::vector<std::size_t> context;
  std::vector<std::size_t> targets;
};

/// Deterministic in (run_seed, task_index).
TaskSplit sample_task_split(const data::TaskDataset& task, std::size_t task_index, std::uint64_t run_seed,
                            const EvalProtocol& protocol);

struct ModelResult {
  std::string name;
  bool probabilistic = false;
  std::vector<MetricsReport> runs;
  std::optional<RunAggregate> aggregate;  ///< absent if no run produced a metric
  /// (run, task) pairs whose per-task fit failed; their targets are left out
  /// of that model's metrics for that run.
  std::size_t fit_failures = 0;
};

struct ExperimentReport {
  EvalProtocol protocol;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> targets_per_run;
  std::vector<ModelResult> models;
};

/// For every run r (seed base_seed + r) and held-out task: sample context and
/// targets, query every model with the same split, pool all targets across
/// tasks and compute the metrics. Runs and tasks are visited in order.
ExperimentReport run_experiment(const std::vector<const Predictor*>& models,
                                const std::vector<data::TaskDataset>& heldout, const EvalProtocol& protocol);

/// {model: {metric: {mean, std}}} plus run metadata; absent metrics are null.
nlohmann::json report_json(const ExperimentReport& report);

/// Aligned text table, metrics as rows and models as columns.
std::string report_table(const nlohmann::json& report);

void to_json(nlohmann::json& j, const EvalProtocol& p);
void from_json(const nlohmann::json& j, EvalProtocol& p);

}  // namespace cnpcreep::eval
