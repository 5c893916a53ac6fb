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

// The operations behind each CLI subcommand. Every command writes only under
// config.out, logs to `log`, and is a pure function of its inputs and seed.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include <json.hpp>

#include "cnpcreep/baselines/pooled.hpp"
#include "cnpcreep/cli/run_config.hpp"
#include "cnpcreep/cnp/cnp.hpp"
#include "cnpcreep/data/features.hpp"
#include "cnpcreep/data/split.hpp"
#include "cnpcreep/error.hpp"
#include "cnpcreep/eval/predictors.hpp"

namespace cnpcreep::cli {

inline constexpr const char* kCnpCheckpoint = "cnp_checkpoint.json";
inline constexpr const char* kPooledCheckpoint = "pooled_checkpoint.json";
inline constexpr const char* kSplitManifest = "split_manifest.json";
inline constexpr const char* kTrainLog = "train_log.json";
inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kReportText = "report.txt";
inline constexpr const char* kPredictions = "predictions.csv";
inline constexpr const char* kSyntheticCsv = "synthetic.csv";
inline constexpr const char* kSyntheticManifest = "synthetic_manifest.json";

/// Exit code for an error kind: config 2, data 3, numeric 4.
int exit_code_for(ErrorKind kind);

struct PreparedData {
  std::vector<data::TaskDataset> tasks;
  data::MetaSplit split;
  data::NormStats norm;
  std::size_t rejected_rows = 0;
};

/// Loads or generates the records, groups tasks, splits, and computes
/// normalization statistics on the meta-training tasks.
PreparedData prepare_data(const RunConfig& config, std::ostream& log);

struct CnpCheckpoint {
  cnp::CnpModel model;
  data::NormStats norm;
  std::uint64_t seed = 0;
  cnp::TrainLog log;
};

nlohmann::json checkpoint_json(const CnpCheckpoint& ckpt, const cnp::EpisodeConfig& episodes);
CnpCheckpoint load_checkpoint(const std::filesystem::path& path);

struct PooledCheckpoint {
  baselines::PooledNn model;
  data::NormStats norm;
  std::uint64_t seed = 0;
  cnp::TrainLog log;
};

PooledCheckpoint load_pooled_checkpoint(const std::filesystem::path& path);

/// Serializes with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// synthetic.csv (ingestion schema) and synthetic_manifest.json.
void cmd_synth_gen(const RunConfig& config, std::ostream& log);

/// cnp_checkpoint.json, pooled_checkpoint.json, split_manifest.json, train_log.json.
void cmd_train(const RunConfig& config, std::ostream& log);

struct EvalHooks {
  /// Evaluated after the configured models, under their own names.
  std::vector<std::shared_ptr<const eval::Predictor>> extra_models;
};

/// report.json, report.txt and plots/<model>/<cast_code>.csv. Returns the
/// text table. An empty `checkpoint` means <out>/cnp_checkpoint.json.
std::string cmd_eval(const RunConfig& config, const std::filesystem::path& checkpoint, std::ostream& log,
                     const EvalHooks& hooks = {});

/// predictions.csv with stress_mpa,temp_c,log10_stress,mu,sigma,lo2s,hi2s in
/// log10 hours. The context file needs stress_mpa,temp_c,time_h; the query
/// file stress_mpa,temp_c. Missing feature columns are a DimensionError.
void cmd_predict(const RunConfig& config, const std::filesystem::path& checkpoint,
                 const std::filesystem::path& context_csv, const std::filesystem::path& query_csv,
                 std::ostream& log);

/// Renders a saved report.json as the text table.
std::string cmd_report(const std::filesystem::path& report_json);

}  // namespace cnpcreep::cli
