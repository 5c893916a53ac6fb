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
#include <vector>

#include <json.hpp>

#include "cnpcreep/cnp/cnp.hpp"

namespace cnpcreep::baselines {

struct PooledConfig {
  std::vector<std::size_t> hidden{64, 64, 64};
  nn::Activation activation = nn::Activation::tanh;
  double sigma_floor = 0.01;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  std::size_t patience = 20;
  std::uint64_t seed = 0;
  nn::AdamConfig adam{};

  void validate() const;
};

/// Single mu/sigma network trained on the union of all meta-training points.
/// Same output head as the CNP decoder (softplus plus floor).
struct PooledNn {
  nn::MlpParams net;  ///< x_dim -> 2
  double sigma_floor = 0.01;

  std::size_t x_dim() const { return net.input_dim(); }
};

struct PooledTrainResult {
  PooledNn model;
  cnp::TrainLog log;
};

/// Minibatch Adam on the mean Gaussian NLL, early-stopped on validation NLL
/// over all validation points. Returns the best snapshot.
PooledTrainResult pretrain_pooled(const std::vector<cnp::PointTask>& train,
                                  const std::vector<cnp::PointTask>& validation, const PooledConfig& config);

/// Takes no context by construction.
cnp::GaussianPrediction pooled_predict(const PooledNn& model, const cnp::TargetSet& query);

void to_json(nlohmann::json& j, const PooledConfig& c);
void from_json(const nlohmann::json& j, PooledConfig& c);
void to_json(nlohmann::json& j, const PooledNn& m);
void from_json(const nlohmann::json& j, PooledNn& m);

}  // namespace cnpcreep::baselines
