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

#include "cnpcreep/nn/mlp.hpp"

#include <cmath>

#include "cnpcreep/error.hpp"

namespace cnpcreep::nn {

std::string to_string(Activation a) { return a == Activation::tanh ? "tanh" : "relu"; }

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  throw ConfigError("unknown activation '" + name + "' (expected tanh or relu)");
}

std::size_t MlpParams::input_dim() const {
  if (layers.empty()) throw DimensionError("network has no layers");
  return layers.front().inputs();
}

std::size_t MlpParams::output_dim() const {
  if (layers.empty()) throw DimensionError("network has no layers");
  return layers.back().outputs();
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

void MlpParams::validate() const {
  if (layers.empty()) throw DimensionError("network has no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    if (l.bias.size() != l.outputs()) {
      throw DimensionError("layer " + std::to_string(k) + ": bias has " + std::to_string(l.bias.size()) +
                           " entries, weight has " + std::to_string(l.outputs()) + " outputs");
    }
    if (k > 0 && layers[k - 1].outputs() != l.inputs()) {
      throw DimensionError("layer " + std::to_string(k) + " expects " + std::to_string(l.inputs()) +
                           " inputs but layer " + std::to_string(k - 1) + " produces " +
                           std::to_string(layers[k - 1].outputs()));
    }
  }
}

MlpParams MlpParams::zeros_like() const {
  MlpParams z;
  z.activation = activation;
  z.layers.reserve(layers.size());
  for (const auto& l : layers) {
    z.layers.push_back(Layer{Matrix(l.weight.rows(), l.weight.cols()), std::vector<double>(l.bias.size(), 0.0)});
  }
  return z;
}

MlpParams init_mlp(std::span<const std::size_t> widths, Activation activation, Rng& rng) {
  if (widths.size() < 2) throw ConfigError("network needs at least input and output widths");
  MlpParams p;
  p.activation = activation;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    const std::size_t fan_in = widths[k];
    const std::size_t fan_out = widths[k + 1];
    if (fan_in == 0 || fan_out == 0) throw ConfigError("layer widths must be positive");
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_in, fan_out);
    for (double& v : w.data()) v = rng.uniform(-limit, limit);
    p.layers.push_back(Layer{std::move(w), std::vector<double>(fan_out, 0.0)});
  }
  return p;
}

namespace {

double activate(Activation a, double z) { return a == Activation::tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0); }

// Derivative expressed through the pre-activation z and post-activation h.
double activate_grad(Activation a, double z, double h) {
  if (a == Activation::tanh) return 1.0 - h * h;
  return z > 0.0 ? 1.0 : 0.0;
}

Matrix affine(const Layer& layer, const Matrix& x) {
  Matrix z = matmul(x, layer.weight);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto r = z.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += layer.bias[j];
  }
  return z;
}

void check_input(const MlpParams& params, const Matrix& input) {
  params.validate();
  if (input.cols() != params.layers.front().inputs()) {
    throw DimensionError("layer 0 expects " + std::to_string(params.layers.front().inputs()) +
                         " input columns, got " + std::to_string(input.cols()));
  }
}

}  // namespace

ForwardResult mlp_forward(const MlpParams& params, const Matrix& input) {
  check_input(params, input);
  ForwardCache cache;
  cache.inputs.reserve(params.layers.size());
  cache.pre.reserve(params.layers.size());
  Matrix h = input;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    Matrix z = affine(params.layers[k], h);
    cache.inputs.push_back(std::move(h));
    h = z;
    if (k + 1 < params.layers.size()) {
      for (double& v : h.data()) v = activate(params.activation, v);
    }
    cache.pre.push_back(std::move(z));
  }
  return ForwardResult{std::move(h), std::move(cache)};
}

Matrix mlp_apply(const MlpParams& params, const Matrix& input) {
  check_input(params, input);
  Matrix h = input;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    h = affine(params.layers[k], h);
    if (k + 1 < params.layers.size()) {
      for (double& v : h.data()) v = activate(params.activation, v);
    }
  }
  return h;
}

BackwardResult mlp_backward(const MlpParams& params, const ForwardCache& cache, const Matrix& grad_output) {
  params.validate();
  const std::size_t n_layers = params.layers.size();
  if (cache.inputs.size() != n_layers || cache.pre.size() != n_layers) {
    throw DimensionError("forward cache holds " + std::to_string(cache.inputs.size()) + " layers, network has " +
                         std::to_string(n_layers));
  }
  const std::size_t batch = cache.inputs.front().rows();
  for (std::size_t k = 0; k < n_layers; ++k) {
    const auto& l = params.layers[k];
    if (cache.inputs[k].cols() != l.inputs() || cache.pre[k].cols() != l.outputs() ||
        cache.inputs[k].rows() != batch || cache.pre[k].rows() != batch) {
      throw DimensionError("forward cache does not match layer " + std::to_string(k));
    }
  }
  if (grad_output.rows() != batch || grad_output.cols() != params.output_dim()) {
    throw DimensionError("grad_output is " + std::to_string(grad_output.rows()) + "x" +
                         std::to_string(grad_output.cols()) + ", expected " + std::to_string(batch) + "x" +
                         std::to_string(params.output_dim()));
  }

  BackwardResult out{params.zeros_like(), Matrix(batch, params.input_dim())};
  Matrix delta = grad_output;  // d loss / d pre-activation of the current layer
  for (std::size_t k = n_layers; k-- > 0;) {
    const auto& layer = params.layers[k];
    out.grads.layers[k].weight = matmul_tn(cache.inputs[k], delta);
    out.grads.layers[k].bias = column_sum(delta);
    Matrix upstream = matmul_nt(delta, layer.weight);
    if (k == 0) {
      out.input_grad = std::move(upstream);
    } else {
      // cache.inputs[k] is the activated output of layer k-1.
      const Matrix& z = cache.pre[k - 1];
      const Matrix& h = cache.inputs[k];
      auto up = upstream.data();
      auto zd = z.data();
      auto hd = h.data();
      for (std::size_t i = 0; i < up.size(); ++i) up[i] *= activate_grad(params.activation, zd[i], hd[i]);
      delta = std::move(upstream);
    }
  }
  return out;
}

std::vector<double> flatten(const MlpParams& params) {
  std::vector<double> flat;
  flat.reserve(params.parameter_count());
  for (const auto& l : params.layers) {
    flat.insert(flat.end(), l.weight.data().begin(), l.weight.data().end());
    flat.insert(flat.end(), l.bias.begin(), l.bias.end());
  }
  return flat;
}

void unflatten(std::span<const double> flat, MlpParams& params) {
  if (flat.size() != params.parameter_count()) {
    throw DimensionError("flat parameter vector has " + std::to_string(flat.size()) + " entries, network has " +
                         std::to_string(params.parameter_count()));
  }
  std::size_t pos = 0;
  for (auto& l : params.layers) {
    for (double& v : l.weight.data()) v = flat[pos++];
    for (double& v : l.bias) v = flat[pos++];
  }
}

void to_json(nlohmann::json& j, const MlpParams& p) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : p.layers) {
    nlohmann::json w = nlohmann::json::array();
    for (std::size_t r = 0; r < l.weight.rows(); ++r) {
      auto row = l.weight.row(r);
      w.push_back(std::vector<double>(row.begin(), row.end()));
    }
    layers.push_back({{"w", std::move(w)}, {"b", l.bias}});
  }
  j = nlohmann::json{{"layers", std::move(layers)}, {"activation", to_string(p.activation)}};
}

void from_json(const nlohmann::json& j, MlpParams& p) {
  try {
    p.activation = activation_from_string(j.at("activation").get<std::string>());
    p.layers.clear();
    for (const auto& lj : j.at("layers")) {
      auto rows = lj.at("w").get<std::vector<std::vector<double>>>();
      p.layers.push_back(Layer{Matrix::from_rows(rows), lj.at("b").get<std::vector<double>>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed network JSON: ") + e.what());
  }
  p.validate();
}

}  // namespace cnpcreep::nn
