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

#include "cnpcreep/nn/adam.hpp"

#include <cmath>

#include "cnpcreep/error.hpp"

namespace cnpcreep::nn {

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("adam: learning rate must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("adam: beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("adam: beta2 must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("adam: epsilon must be positive");
}

AdamState AdamState::for_params(const MlpParams& params, const AdamConfig& config) {
  config.validate();
  return AdamState{params.zeros_like(), params.zeros_like(), 0, config};
}

namespace {
bool same_shape(const MlpParams& a, const MlpParams& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t k = 0; k < a.layers.size(); ++k) {
    if (a.layers[k].weight.rows() != b.layers[k].weight.rows() ||
        a.layers[k].weight.cols() != b.layers[k].weight.cols() ||
        a.layers[k].bias.size() != b.layers[k].bias.size()) {
      return false;
    }
  }
  return true;
}

void update(std::span<double> p, std::span<const double> g, std::span<double> m, std::span<double> v,
            const AdamConfig& c, double correction1, double correction2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    p[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}
}  // namespace

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state) {
  if (!same_shape(params, grads)) throw DimensionError("adam: gradient shapes do not match parameters");
  if (!same_shape(params, state.m) || !same_shape(params, state.v)) {
    throw DimensionError("adam: optimizer state shapes do not match parameters");
  }
  for (std::size_t k = 0; k < grads.layers.size(); ++k) {
    const auto& l = grads.layers[k];
    bool finite = l.weight.all_finite();
    for (double b : l.bias) finite = finite && std::isfinite(b);
    if (!finite) throw NumericError("training diverged: non-finite gradient in layer " + std::to_string(k));
  }

  state.t += 1;
  const auto& c = state.config;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    auto& p = params.layers[k];
    const auto& g = grads.layers[k];
    update(p.weight.data(), g.weight.data(), state.m.layers[k].weight.data(), state.v.layers[k].weight.data(), c,
           correction1, correction2);
    update(p.bias, g.bias, state.m.layers[k].bias, state.v.layers[k].bias, c, correction1, correction2);
  }
}

}  // namespace cnpcreep::nn
