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

#include "cnpcreep/cnp/cnp.hpp"

#include <cmath>
#include <limits>

#include "cnpcreep/error.hpp"
#include "cnpcreep/random.hpp"

namespace cnpcreep::cnp {

void CnpConfig::validate() const {
  if (x_dim == 0) throw ConfigError("cnp: x_dim must be positive");
  if (r_dim == 0) throw ConfigError("cnp: r_dim must be positive");
  for (auto w : encoder_hidden) {
    if (w == 0) throw ConfigError("cnp: encoder hidden widths must be positive");
  }
  for (auto w : decoder_hidden) {
    if (w == 0) throw ConfigError("cnp: decoder hidden widths must be positive");
  }
  if (!(sigma_floor > 0.0)) throw ConfigError("cnp: sigma_floor must be positive");
}

CnpModel CnpModel::initialize(const CnpConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::vector<std::size_t> enc{config.x_dim + 1};
  enc.insert(enc.end(), config.encoder_hidden.begin(), config.encoder_hidden.end());
  enc.push_back(config.r_dim);
  std::vector<std::size_t> dec{config.x_dim + config.r_dim};
  dec.insert(dec.end(), config.decoder_hidden.begin(), config.decoder_hidden.end());
  dec.push_back(2);
  CnpModel m{config, nn::init_mlp(enc, config.activation, rng), nn::init_mlp(dec, config.activation, rng)};
  return m;
}

void CnpModel::validate() const {
  config.validate();
  encoder.validate();
  decoder.validate();
  if (encoder.input_dim() != config.x_dim + 1 || encoder.output_dim() != config.r_dim) {
    throw DimensionError("cnp: encoder shape does not match config (x_dim " + std::to_string(config.x_dim) +
                         ", r_dim " + std::to_string(config.r_dim) + ")");
  }
  if (decoder.input_dim() != config.x_dim + config.r_dim || decoder.output_dim() != 2) {
    throw DimensionError("cnp: decoder shape does not match config");
  }
}

namespace {

nn::Matrix context_matrix(const CnpModel& model, const ContextSet& context) {
  const std::size_t d = model.config.x_dim;
  nn::Matrix in(context.points.size(), d + 1);
  for (std::size_t i = 0; i < context.points.size(); ++i) {
    const auto& p = context.points[i];
    if (p.x.size() != d) {
      throw DimensionError("context point " + std::to_string(i) + " has " + std::to_string(p.x.size()) +
                           " features, expected d_x = " + std::to_string(d));
    }
    auto row = in.row(i);
    for (std::size_t k = 0; k < d; ++k) row[k] = p.x[k];
    row[d] = p.y;
  }
  return in;
}

nn::Matrix target_matrix(const CnpModel& model, const Representation& r, const TargetSet& targets) {
  const std::size_t d = model.config.x_dim;
  if (targets.xs.empty()) throw DimensionError("target set is empty");
  if (r.r.size() != model.config.r_dim) {
    throw DimensionError("representation has " + std::to_string(r.r.size()) + " entries, expected d_r = " +
                         std::to_string(model.config.r_dim));
  }
  nn::Matrix in(targets.xs.size(), d + r.r.size());
  for (std::size_t t = 0; t < targets.xs.size(); ++t) {
    const auto& x = targets.xs[t];
    if (x.size() != d) {
      throw DimensionError("target " + std::to_string(t) + " has " + std::to_string(x.size()) +
                           " features, expected d_x = " + std::to_string(d));
    }
    auto row = in.row(t);
    for (std::size_t k = 0; k < d; ++k) row[k] = x[k];
    for (std::size_t k = 0; k < r.r.size(); ++k) row[d + k] = r.r[k];
  }
  return in;
}

}  // namespace

Representation encode(const CnpModel& model, const ContextSet& context) {
  if (context.points.empty()) return Representation{std::vector<double>(model.config.r_dim, 0.0)};
  const auto h = nn::mlp_apply(model.encoder, context_matrix(model, context));
  return Representation{nn::column_mean(h)};
}

GaussianPrediction decode(const CnpModel& model, const Representation& r, const TargetSet& targets) {
  const auto raw = nn::mlp_apply(model.decoder, target_matrix(model, r, targets));
  auto pred = gaussian_head(raw, model.config.sigma_floor);
  pred.validate();
  return pred;
}

GaussianPrediction predict(const CnpModel& model, const ContextSet& context, const TargetSet& query) {
  return decode(model, encode(model, context), query);
}

EpisodeGradients episode_loss_and_grad(const CnpModel& model, const ContextSet& context, const TargetSet& targets,
                                       std::span<const double> ys) {
  if (ys.size() != targets.xs.size()) {
    throw DimensionError("episode has " + std::to_string(targets.xs.size()) + " targets but " +
                         std::to_string(ys.size()) + " values");
  }
  const std::size_t d = model.config.x_dim;
  const std::size_t dr = model.config.r_dim;

  EpisodeGradients out;
  Representation r{std::vector<double>(dr, 0.0)};
  nn::ForwardResult enc;
  const bool has_context = !context.points.empty();
  if (has_context) {
    enc = nn::mlp_forward(model.encoder, context_matrix(model, context));
    r.r = nn::column_mean(enc.output);
  }

  auto dec = nn::mlp_forward(model.decoder, target_matrix(model, r, targets));
  auto head = gaussian_head_loss(dec.output, ys, model.config.sigma_floor);
  out.loss = head.loss;
  auto dec_back = nn::mlp_backward(model.decoder, dec.cache, head.raw_grad);
  out.decoder = std::move(dec_back.grads);

  if (!has_context) {
    out.encoder = model.encoder.zeros_like();
    return out;
  }
  // r is shared by every target row; its gradient is the sum over rows of the
  // decoder input gradient in the r columns. The mean spreads it evenly back
  // over the context encodings.
  std::vector<double> r_grad(dr, 0.0);
  for (std::size_t t = 0; t < dec_back.input_grad.rows(); ++t) {
    auto row = dec_back.input_grad.row(t);
    for (std::size_t k = 0; k < dr; ++k) r_grad[k] += row[d + k];
  }
  const double inv_m = 1.0 / static_cast<double>(context.points.size());
  nn::Matrix enc_grad(context.points.size(), dr);
  for (std::size_t i = 0; i < enc_grad.rows(); ++i) {
    auto row = enc_grad.row(i);
    for (std::size_t k = 0; k < dr; ++k) row[k] = r_grad[k] * inv_m;
  }
  out.encoder = nn::mlp_backward(model.encoder, enc.cache, enc_grad).grads;
  return out;
}

void EpisodeConfig::validate() const {
  if (context_min < 1) throw ConfigError("episodes: context_min must be at least 1");
  if (context_max < context_min) throw ConfigError("episodes: context_max must be >= context_min");
  if (epochs > 0 && episodes_per_epoch == 0) throw ConfigError("episodes: episodes_per_epoch must be positive");
  if (validation_episodes == 0) throw ConfigError("episodes: validation_episodes must be positive");
  adam.validate();
}

void split_episode(const PointTask& task, std::span<const std::size_t> context_idx, bool targets_include_context,
                   ContextSet& context, TargetSet& targets, std::vector<double>& ys) {
  context.points.clear();
  targets.xs.clear();
  ys.clear();
  std::vector<bool> in_context(task.points.size(), false);
  for (auto i : context_idx) {
    in_context.at(i) = true;
    context.points.push_back(task.points[i]);
  }
  for (std::size_t i = 0; i < task.points.size(); ++i) {
    if (in_context[i] && !targets_include_context) continue;
    targets.xs.push_back(task.points[i].x);
    ys.push_back(task.points[i].y);
  }
}

namespace {

void check_task_sizes(const std::vector<PointTask>& tasks, std::size_t context_max, const char* which) {
  std::string offenders;
  for (const auto& t : tasks) {
    if (t.points.size() < context_max + 1) {
      if (!offenders.empty()) offenders += ", ";
      offenders += t.id + " (" + std::to_string(t.points.size()) + ")";
    }
  }
  if (!offenders.empty()) {
    throw ConfigError(std::string(which) + " tasks need at least context_max + 1 = " +
                      std::to_string(context_max + 1) + " points; too small: " + offenders);
  }
}

constexpr std::uint64_t kValidationStream = 0x76616C6964ULL;
constexpr std::uint64_t kInitStream = 0x696E6974ULL;

}  // namespace

double validation_nll(const CnpModel& model, const std::vector<PointTask>& tasks, const EpisodeConfig& episodes) {
  if (tasks.empty()) throw ConfigError("validation set is empty");
  double total = 0.0;
  std::size_t count = 0;
  ContextSet context;
  TargetSet targets;
  std::vector<double> ys;
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    const auto& task = tasks[ti];
    Rng rng(derive_seed(episodes.seed, kValidationStream, ti));
    for (std::size_t e = 0; e < episodes.validation_episodes; ++e) {
      const std::size_t m = rng.integer(episodes.context_min, episodes.context_max);
      const auto idx = rng.sample_without_replacement(task.points.size(), m);
      split_episode(task, idx, false, context, targets, ys);
      total += nll_loss(predict(model, context, targets), ys);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

TrainResult meta_train(const std::vector<PointTask>& train, const std::vector<PointTask>& validation,
                       const EpisodeConfig& episodes, const CnpConfig& arch) {
  episodes.validate();
  arch.validate();
  if (train.empty()) throw ConfigError("meta_train: no training tasks");
  check_task_sizes(train, episodes.context_max, "training");
  check_task_sizes(validation, episodes.context_max, "validation");

  TrainResult result{CnpModel::initialize(arch, derive_seed(episodes.seed, kInitStream)), TrainLog{}};
  if (episodes.epochs == 0) return result;

  CnpModel model = result.model;
  auto enc_state = nn::AdamState::for_params(model.encoder, episodes.adam);
  auto dec_state = nn::AdamState::for_params(model.decoder, episodes.adam);

  double best = validation_nll(model, validation, episodes);
  result.log.initial_validation_nll = best;
  std::size_t since_best = 0;

  Rng rng(episodes.seed);
  ContextSet context;
  TargetSet targets;
  std::vector<double> ys;
  for (std::size_t epoch = 1; epoch <= episodes.epochs; ++epoch) {
    double train_total = 0.0;
    for (std::size_t e = 0; e < episodes.episodes_per_epoch; ++e) {
      const auto& task = train[rng.index(train.size())];
      const std::size_t m = rng.integer(episodes.context_min, episodes.context_max);
      const auto idx = rng.sample_without_replacement(task.points.size(), m);
      split_episode(task, idx, episodes.targets_include_context, context, targets, ys);
      auto g = episode_loss_and_grad(model, context, targets, ys);
      if (!std::isfinite(g.loss)) throw NumericError("training diverged: non-finite episode loss");
      train_total += g.loss;
      nn::adam_step(model.encoder, g.encoder, enc_state);
      nn::adam_step(model.decoder, g.decoder, dec_state);
    }
    const double val = validation_nll(model, validation, episodes);
    if (!std::isfinite(val)) throw NumericError("training diverged: non-finite validation loss");
    result.log.epochs.push_back(
        EpochRecord{epoch, train_total / static_cast<double>(episodes.episodes_per_epoch), val});
    if (val < best) {
      best = val;
      since_best = 0;
      result.model = model;
      result.log.best_epoch = epoch;
    } else if (++since_best >= episodes.patience) {
      result.log.stopped_early = true;
      break;
    }
  }
  return result;
}

void to_json(nlohmann::json& j, const CnpConfig& c) {
  j = nlohmann::json{{"x_dim", c.x_dim},
                     {"r_dim", c.r_dim},
                     {"encoder_hidden", c.encoder_hidden},
                     {"decoder_hidden", c.decoder_hidden},
                     {"activation", nn::to_string(c.activation)},
                     {"sigma_floor", c.sigma_floor}};
}

void from_json(const nlohmann::json& j, CnpConfig& c) {
  CnpConfig d;
  c.x_dim = j.value("x_dim", d.x_dim);
  c.r_dim = j.value("r_dim", d.r_dim);
  c.encoder_hidden = j.value("encoder_hidden", d.encoder_hidden);
  c.decoder_hidden = j.value("decoder_hidden", d.decoder_hidden);
  c.activation = nn::activation_from_string(j.value("activation", nn::to_string(d.activation)));
  c.sigma_floor = j.value("sigma_floor", d.sigma_floor);
}

void to_json(nlohmann::json& j, const EpisodeConfig& c) {
  j = nlohmann::json{{"context_min", c.context_min},
                     {"context_max", c.context_max},
                     {"targets_include_context", c.targets_include_context},
                     {"episodes_per_epoch", c.episodes_per_epoch},
                     {"epochs", c.epochs},
                     {"patience", c.patience},
                     {"validation_episodes", c.validation_episodes},
                     {"seed", c.seed},
                     {"learning_rate", c.adam.learning_rate},
                     {"beta1", c.adam.beta1},
                     {"beta2", c.adam.beta2},
                     {"epsilon", c.adam.epsilon}};
}

void from_json(const nlohmann::json& j, EpisodeConfig& c) {
  EpisodeConfig d;
  c.context_min = j.value("context_min", d.context_min);
  c.context_max = j.value("context_max", d.context_max);
  c.targets_include_context = j.value("targets_include_context", d.targets_include_context);
  c.episodes_per_epoch = j.value("episodes_per_epoch", d.episodes_per_epoch);
  c.epochs = j.value("epochs", d.epochs);
  c.patience = j.value("patience", d.patience);
  c.validation_episodes = j.value("validation_episodes", d.validation_episodes);
  c.seed = j.value("seed", d.seed);
  c.adam.learning_rate = j.value("learning_rate", d.adam.learning_rate);
  c.adam.beta1 = j.value("beta1", d.adam.beta1);
  c.adam.beta2 = j.value("beta2", d.adam.beta2);
  c.adam.epsilon = j.value("epsilon", d.adam.epsilon);
}

void to_json(nlohmann::json& j, const TrainLog& log) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : log.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_nll", e.train_nll}, {"validation_nll", e.validation_nll}});
  }
  j = nlohmann::json{{"initial_validation_nll", log.initial_validation_nll},
                     {"epochs", std::move(epochs)},
                     {"best_epoch", log.best_epoch},
                     {"stopped_early", log.stopped_early}};
}

void from_json(const nlohmann::json& j, TrainLog& log) {
  log.initial_validation_nll = j.value("initial_validation_nll", 0.0);
  log.best_epoch = j.value("best_epoch", std::size_t{0});
  log.stopped_early = j.value("stopped_early", false);
  log.epochs.clear();
  for (const auto& e : j.value("epochs", nlohmann::json::array())) {
    log.epochs.push_back(EpochRecord{e.at("epoch").get<std::size_t>(), e.at("train_nll").get<double>(),
                                     e.at("validation_nll").get<double>()});
  }
}

}  // namespace cnpcreep::cnp
