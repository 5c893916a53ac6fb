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

// Conditional neural process.
//
// A context set {(x_i, y_i)} is encoded point by point with an MLP and the
// encodings are averaged into a single representation r. Each query x_t is
// then decoded together with r into an independent Gaussian (mu_t, sigma_t).
// Training draws episodes (task, context subset, targets) and takes one Adam
// step on the mean target negative log-likelihood per episode.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnpcreep/cnp/gaussian.hpp"
#include "cnpcreep/nn/adam.hpp"
#include "cnpcreep/nn/mlp.hpp"

namespace cnpcreep::cnp {

struct LabeledPoint {
  std::vector<double> x;
  double y = 0.0;
};

struct ContextSet {
  std::vector<LabeledPoint> points;
};

struct TargetSet {
  std::vector<std::vector<double>> xs;
};

struct Representation {
  std::vector<double> r;
};

struct CnpConfig {
  std::size_t x_dim = 2;
  std::size_t r_dim = 64;
  std::vector<std::size_t> encoder_hidden{64, 64, 64};
  std::vector<std::size_t> decoder_hidden{64, 64, 64};
  nn::Activation activation = nn::Activation::tanh;
  double sigma_floor = 0.01;

  void validate() const;
};

struct CnpModel {
  CnpConfig config;
  nn::MlpParams encoder;  ///< (x_dim + 1) -> r_dim
  nn::MlpParams decoder;  ///< (x_dim + r_dim) -> 2

  static CnpModel initialize(const CnpConfig& config, std::uint64_t seed);
  /// Checks network shapes against the config.
  void validate() const;

  friend bool operator==(const CnpModel& a, const CnpModel& b) {
    return a.encoder == b.encoder && a.decoder == b.decoder;
  }
};

/// Mean of the per-point encodings; the zero vector for an empty context.
Representation encode(const CnpModel& model, const ContextSet& context);

GaussianPrediction decode(const CnpModel& model, const Representation& r, const TargetSet& targets);

GaussianPrediction predict(const CnpModel& model, const ContextSet& context, const TargetSet& query);

struct EpisodeGradients {
  double loss = 0.0;
  nn::MlpParams encoder;
  nn::MlpParams decoder;
};

/// Mean target NLL of one episode and its exact gradient w.r.t. every encoder
/// and decoder parameter. With an empty context the encoder gradient is zero.
EpisodeGradients episode_loss_and_grad(const CnpModel& model, const ContextSet& context, const TargetSet& targets,
                                       std::span<const double> ys);

/// One task's points in model space. `id` is the cast code.
struct PointTask {
  std::string id;
  std::vector<LabeledPoint> points;
};

struct EpisodeConfig {
  std::size_t context_min = 3;
  std::size_t context_max = 10;
  bool targets_include_context = true;
  std::size_t episodes_per_epoch = 200;
  std::size_t epochs = 100;
  std::size_t patience = 20;
  /// Fixed episodes drawn once per validation task for early stopping.
  std::size_t validation_episodes = 4;
  std::uint64_t seed = 0;
  nn::AdamConfig adam{};

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_nll = 0.0;
  double validation_nll = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainLog {
  double initial_validation_nll = 0.0;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  ///< 1-based; 0 means the initial model was kept
  bool stopped_early = false;

  friend bool operator==(const TrainLog&, const TrainLog&) = default;
};

struct TrainResult {
  CnpModel model;
  TrainLog log;
};

/// Episodic maximum-likelihood training with early stopping on validation
/// NLL. Returns the best snapshot seen (including the initial model).
TrainResult meta_train(const std::vector<PointTask>& train, const std::vector<PointTask>& validation,
                       const EpisodeConfig& episodes, const CnpConfig& arch);

/// Mean NLL over fixed (seeded) episodes whose targets are the non-context points.
double validation_nll(const CnpModel& model, const std::vector<PointTask>& tasks, const EpisodeConfig& episodes);

/// Splits a task into a context set and a target set by index.
void split_episode(const PointTask& task, std::span<const std::size_t> context_idx, bool targets_include_context,
                   ContextSet& context, TargetSet& targets, std::vector<double>& ys);

void to_json(nlohmann::json& j, const CnpConfig& c);
void from_json(const nlohmann::json& j, CnpConfig& c);
void to_json(nlohmann::json& j, const EpisodeConfig& c);
void from_json(const nlohmann::json& j, EpisodeConfig& c);
void to_json(nlohmann::json& j, const TrainLog& log);
void from_json(const nlohmann::json& j, TrainLog& log);

}  // namespace cnpcreep::cnp
