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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnpcreep/nn/matrix.hpp"
#include "cnpcreep/random.hpp"

namespace cnpcreep::nn {

enum class Activation { tanh, relu };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

/// One affine layer, y = x W + b with W shaped (inputs x outputs).
struct Layer {
  Matrix weight;
  std::vector<double> bias;

  std::size_t inputs() const noexcept { return weight.rows(); }
  std::size_t outputs() const noexcept { return weight.cols(); }

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Fully connected network. `activation` is applied after every layer except
/// the last, which is affine.
///
/// The same type doubles as the container for gradients and Adam moments,
/// since those have exactly the parameter shapes.
struct MlpParams {
  std::vector<Layer> layers;
  Activation activation = Activation::tanh;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;

  /// Throws DimensionError if layer shapes do not chain.
  void validate() const;

  /// Same shapes, all entries zero.
  MlpParams zeros_like() const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

/// Glorot-uniform weights in +/- sqrt(6 / (fan_in + fan_out)), zero biases.
/// `widths` lists every layer width including input and output.
MlpParams init_mlp(std::span<const std::size_t> widths, Activation activation, Rng& rng);

/// Per-layer values saved by the forward pass. `inputs[k]` is the input fed to
/// layer k (inputs[0] is the network input); `pre[k]` is layer k's affine output.
struct ForwardCache {
  std::vector<Matrix> inputs;
  std::vector<Matrix> pre;
};

struct ForwardResult {
  Matrix output;
  ForwardCache cache;
};

ForwardResult mlp_forward(const MlpParams& params, const Matrix& input);

/// Forward pass without keeping the cache.
Matrix mlp_apply(const MlpParams& params, const Matrix& input);

struct BackwardResult {
  MlpParams grads;   ///< d loss / d params, shaped like the network
  Matrix input_grad; ///< d loss / d input
};

/// Backpropagates `grad_output` (d loss / d output, batch x d_out) through the
/// network using a cache from the matching forward call.
BackwardResult mlp_backward(const MlpParams& params, const ForwardCache& cache, const Matrix& grad_output);

/// Flat views in layer order: weight (row-major) then bias, per layer.
std::vector<double> flatten(const MlpParams& params);
void unflatten(std::span<const double> flat, MlpParams& params);

void to_json(nlohmann::json& j, const MlpParams& p);
void from_json(const nlohmann::json& j, MlpParams& p);

}  // namespace cnpcreep::nn
