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

#include <span>
#include <vector>

#include "cnpcreep/nn/matrix.hpp"

namespace cnpcreep::cnp {

/// Independent per-point Gaussians N(means[t], stds[t]^2).
struct GaussianPrediction {
  std::vector<double> means;
  std::vector<double> stds;

  std::size_t size() const noexcept { return means.size(); }
  /// Throws if lengths differ or any std is not strictly positive and finite.
  void validate() const;
};

/// log(1 + exp(x)) without overflow.
double softplus(double x);
/// d softplus / dx.
double sigmoid(double x);

/// Maps raw network outputs (n x 2: mean, pre-std) to a prediction with
/// std = sigma_floor + softplus(pre-std).
GaussianPrediction gaussian_head(const nn::Matrix& raw, double sigma_floor);

/// Mean per-point negative log density:
///   (1/n) sum_t [ 0.5 log(2 pi) + log s_t + (y_t - m_t)^2 / (2 s_t^2) ].
double nll_loss(const GaussianPrediction& pred, std::span<const double> ys);

struct HeadLoss {
  double loss;
  nn::Matrix raw_grad;  ///< d loss / d raw outputs, n x 2
};

/// nll_loss of gaussian_head(raw) together with its gradient w.r.t. `raw`.
HeadLoss gaussian_head_loss(const nn::Matrix& raw, std::span<const double> ys, double sigma_floor);

}  // namespace cnpcreep::cnp
