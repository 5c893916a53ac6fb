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

// Model-space features:
//   x = (log10 stress, (temp - temp_mean) / temp_std)
//   y = (log10 rupture_h - y_mean) / y_std
// Reported quantities are mapped back to log10 hours.

#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "cnpcreep/cnp/cnp.hpp"
#include "cnpcreep/data/records.hpp"

namespace cnpcreep::data {

inline constexpr std::size_t kFeatureDim = 2;

struct NormStats {
  double temp_mean = 0.0;
  double temp_std = 1.0;
  double y_mean = 0.0;
  double y_std = 1.0;

  /// FNV-1a over the bit patterns; used to check stats are never mutated.
  std::uint64_t fingerprint() const;

  friend bool operator==(const NormStats&, const NormStats&) = default;
};

/// Mean and population std over every record of `tasks`. A channel with zero
/// spread gets std 1.
NormStats compute_norm_stats(const std::vector<TaskDataset>& tasks);

std::vector<double> featurize_x(double stress_mpa, double temp_c, const NormStats& norm);
cnp::LabeledPoint featurize(const CreepRecord& r, const NormStats& norm);
cnp::PointTask featurize_task(const TaskDataset& task, const NormStats& norm);
std::vector<cnp::PointTask> featurize_tasks(const std::vector<TaskDataset>& tasks, const NormStats& norm);

/// Model-space y back to log10 hours.
double unnormalize_y(double y, const NormStats& norm);
/// Model-space prediction back to log10 hours (means shifted and scaled, stds scaled).
cnp::GaussianPrediction unnormalize(const cnp::GaussianPrediction& pred, const NormStats& norm);

void to_json(nlohmann::json& j, const NormStats& n);
void from_json(const nlohmann::json& j, NormStats& n);

}  // namespace cnpcreep::data
