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

#include "cnpcreep/baselines/pooled.hpp"

#include <algorithm>
#include <cmath>

#include "cnpcreep/error.hpp"
#include "cnpcreep/random.hpp"

namespace cnpcreep::baselines {

void PooledConfig::validate() const {
  for (auto w : hidden) {
    if (w == 0) throw ConfigError("pooled: hidden widths must be positive");
  }
  if (!(sigma_floor > 0.0)) throw ConfigError("pooled: sigma_floor must be positive");
  if (batch_size == 0) throw ConfigError("pooled: batch_size must be positive");
  adam.validate();
}

namespace {

struct FlatData {
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
};

FlatData pool(const std::vector<cnp::PointTask>& tasks) {
  FlatData d;
  for (const auto& t : tasks) {
    for (const auto& p : t.points) {
      d.xs.push_back(p.x);
      d.ys.push_back(p.y);
    }
  }
  return d;
}

nn::Matrix rows_of(const std::vector<std::vector<double>>& xs, std::span<const std::size_t> idx, std::size_t d) {
  nn::Matrix m(idx.size(), d);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& x = xs[idx[i]];
    if (x.size() != d) throw DimensionError("pooled: inconsistent feature count in training data");
    std::copy(x.begin(), x.end(), m.row(i).begin());
  }
  return m;
}

double dataset_nll(const PooledNn& model, const FlatData& data) {
  return cnp::nll_loss(pooled_predict(model, cnp::TargetSet{data.xs}), data.ys);
}

}  // namespace

PooledTrainResult pretrain_pooled(const std::vector<cnp::PointTask>& train,
                                  const std::vector<cnp::PointTask>& validation, const PooledConfig& config) {
  config.validate();
  const FlatData data = pool(train);
  if (data.xs.empty()) throw ConfigError("pretrain_pooled: no training points");
  const std::size_t d = data.xs.front().size();

  Rng rng(config.seed);
  std::vector<std::size_t> widths{d};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(2);
  PooledTrainResult result{PooledNn{nn::init_mlp(widths, config.activation, rng), config.sigma_floor}, {}};
  if (config.epochs == 0) return result;

  const FlatData val = pool(validation);
  if (val.xs.empty()) throw ConfigError("pretrain_pooled: validation set is empty");

  PooledNn model = result.model;
  auto state = nn::AdamState::for_params(model.net, config.adam);
  double best = dataset_nll(model, val);
  result.log.initial_validation_nll = best;
  std::size_t since_best = 0;

  std::vector<std::size_t> order(data.xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> batch_y;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::span<const std::size_t> idx(order.data() + start, end - start);
      batch_y.clear();
      for (auto i : idx) batch_y.push_back(data.ys[i]);
      auto fwd = nn::mlp_forward(model.net, rows_of(data.xs, idx, d));
      auto head = cnp::gaussian_head_loss(fwd.output, batch_y, model.sigma_floor);
      if (!std::isfinite(head.loss)) throw NumericError("pooled training diverged: non-finite loss");
      total += head.loss;
      ++batches;
      auto back = nn::mlp_backward(model.net, fwd.cache, head.raw_grad);
      nn::adam_step(model.net, back.grads, state);
    }
    const double v = dataset_nll(model, val);
    if (!std::isfinite(v)) throw NumericError("pooled training diverged: non-finite validation loss");
    result.log.epochs.push_back(cnp::EpochRecord{epoch, total / static_cast<double>(batches), v});
    if (v < best) {
      best = v;
      since_best = 0;
      result.model = model;
      result.log.best_epoch = epoch;
    } else if (++since_best >= config.patience) {
      result.log.stopped_early = true;
      break;
    }
  }
  return result;
}

cnp::GaussianPrediction pooled_predict(const PooledNn& model, const cnp::TargetSet& query) {
  if (query.xs.empty()) throw DimensionError("pooled: query set is empty");
  const std::size_t d = model.x_dim();
  nn::Matrix in(query.xs.size(), d);
  for (std::size_t t = 0; t < query.xs.size(); ++t) {
    if (query.xs[t].size() != d) {
      throw DimensionError("pooled: query " + std::to_string(t) + " has " + std::to_string(query.xs[t].size()) +
                           " features, expected " + std::to_string(d));
    }
    std::copy(query.xs[t].begin(), query.xs[t].end(), in.row(t).begin());
  }
  auto pred = cnp::gaussian_head(nn::mlp_apply(model.net, in), model.sigma_floor);
  pred.validate();
  return pred;
}

void to_json(nlohmann::json& j, const PooledConfig& c) {
  j = nlohmann::json{{"hidden", c.hidden},
                     {"activation", nn::to_string(c.activation)},
                     {"sigma_floor", c.sigma_floor},
                     {"epochs", c.epochs},
                     {"batch_size", c.batch_size},
                     {"patience", c.patience},
                     {"seed", c.seed},
                     {"learning_rate", c.adam.learning_rate}};
}

void from_json(const nlohmann::json& j, PooledConfig& c) {
  PooledConfig d;
  c.hidden = j.value("hidden", d.hidden);
  c.activation = nn::activation_from_string(j.value("activation", nn::to_string(d.activation)));
  c.sigma_floor = j.value("sigma_floor", d.sigma_floor);
  c.epochs = j.value("epochs", d.epochs);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.patience = j.value("patience", d.patience);
  c.seed = j.value("seed", d.seed);
  c.adam.learning_rate = j.value("learning_rate", d.adam.learning_rate);
}

void to_json(nlohmann::json& j, const PooledNn& m) {
  j = nlohmann::json{{"net", m.net}, {"sigma_floor", m.sigma_floor}};
}

void from_json(const nlohmann::json& j, PooledNn& m) {
  m.net = j.at("net").get<nn::MlpParams>();
  m.sigma_floor = j.at("sigma_floor").get<double>();
}

}  // namespace cnpcreep::baselines
