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

// Uniform view over every compared model: given a task's context records
// (raw units), predict log10 rupture hours at query conditions.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "cnpcreep/baselines/gaussian_process.hpp"
#include "cnpcreep/baselines/larson_miller.hpp"
#include "cnpcreep/baselines/pooled.hpp"
#include "cnpcreep/cnp/cnp.hpp"
#include "cnpcreep/data/features.hpp"
#include "cnpcreep/data/records.hpp"

namespace cnpcreep::eval {

struct QueryPoint {
  double stress_mpa = 0.0;
  double temp_c = 0.0;
};

/// Predictions in log10 hours. `stds` is empty for point-only models.
struct Prediction {
  std::vector<double> means;
  std::vector<double> stds;
};

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string name() const = 0;
  virtual bool probabilistic() const = 0;
  /// Per-task models are fitted on `context` alone. May throw FitError.
  virtual Prediction predict(std::span<const data::CreepRecord> context,
                             std::span<const QueryPoint> queries) const = 0;
};

std::vector<QueryPoint> queries_of(std::span<const data::CreepRecord> records);

class CnpPredictor : public Predictor {
 public:
  CnpPredictor(cnp::CnpModel model, data::NormStats norm) : model_(std::move(model)), norm_(norm) {}
  std::string name() const override { return "cnp"; }
  bool probabilistic() const override { return true; }
  Prediction predict(std::span<const data::CreepRecord> context, std::span<const QueryPoint> queries) const override;

 private:
  cnp::CnpModel model_;
  data::NormStats norm_;
};

class PooledPredictor : public Predictor {
 public:
  PooledPredictor(baselines::PooledNn model, data::NormStats norm) : model_(std::move(model)), norm_(norm) {}
  std::string name() const override { return "pooled"; }
  bool probabilistic() const override { return true; }
  /// Ignores `context`.
  Prediction predict(std::span<const data::CreepRecord> context, std::span<const QueryPoint> queries) const override;

 private:
  baselines::PooledNn model_;
  data::NormStats norm_;
};

class LmPredictor : public Predictor {
 public:
  explicit LmPredictor(int degree, double c_lm = baselines::kDefaultCLm) : degree_(degree), c_lm_(c_lm) {}
  std::string name() const override { return "lm" + std::to_string(degree_); }
  bool probabilistic() const override { return false; }
  Prediction predict(std::span<const data::CreepRecord> context, std::span<const QueryPoint> queries) const override;

 private:
  int degree_;
  double c_lm_;
};

/// GP on model-space features, refitted (grid search) per context.
class GpPredictor : public Predictor {
 public:
  GpPredictor(baselines::GpGrid grid, data::NormStats norm) : grid_(std::move(grid)), norm_(norm) {}
  std::string name() const override { return "gp"; }
  bool probabilistic() const override { return true; }
  Prediction predict(std::span<const data::CreepRecord> context, std::span<const QueryPoint> queries) const override;

 private:
  baselines::GpGrid grid_;
  data::NormStats norm_;
};

}  // namespace cnpcreep::eval
