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

#include "cnpcreep/cnp/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "cnpcreep/error.hpp"

namespace cnpcreep::cnp {

namespace {
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
}

void GaussianPrediction::validate() const {
  if (means.size() != stds.size()) {
    throw DimensionError("prediction has " + std::to_string(means.size()) + " means but " +
                         std::to_string(stds.size()) + " stds");
  }
  for (std::size_t i = 0; i < stds.size(); ++i) {
    if (!(stds[i] > 0.0) || !std::isfinite(stds[i]) || !std::isfinite(means[i])) {
      throw NumericError("prediction " + std::to_string(i) + " is not a proper Gaussian");
    }
  }
}

double softplus(double x) { return std::log1p(std::exp(-std::abs(x))) + (x > 0.0 ? x : 0.0); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

GaussianPrediction gaussian_head(const nn::Matrix& raw, double sigma_floor) {
  if (raw.cols() != 2) throw DimensionError("gaussian head expects 2 raw outputs, got " + std::to_string(raw.cols()));
  GaussianPrediction p;
  p.means.resize(raw.rows());
  p.stds.resize(raw.rows());
  for (std::size_t t = 0; t < raw.rows(); ++t) {
    p.means[t] = raw(t, 0);
    p.stds[t] = sigma_floor + softplus(raw(t, 1));
  }
  return p;
}

double nll_loss(const GaussianPrediction& pred, std::span<const double> ys) {
  if (pred.means.size() != ys.size() || pred.stds.size() != ys.size()) {
    throw DimensionError("nll_loss: " + std::to_string(pred.means.size()) + " predictions for " +
                         std::to_string(ys.size()) + " targets");
  }
  if (ys.empty()) throw DimensionError("nll_loss: no targets");
  double total = 0.0;
  for (std::size_t t = 0; t < ys.size(); ++t) {
    const double s = pred.stds[t];
    const double z = (ys[t] - pred.means[t]) / s;
    total += kHalfLog2Pi + std::log(s) + 0.5 * z * z;
  }
  return total / static_cast<double>(ys.size());
}

HeadLoss gaussian_head_loss(const nn::Matrix& raw, std::span<const double> ys, double sigma_floor) {
  const auto pred = gaussian_head(raw, sigma_floor);
  const double loss = nll_loss(pred, ys);
  const double inv_n = 1.0 / static_cast<double>(ys.size());
  nn::Matrix grad(raw.rows(), 2);
  for (std::size_t t = 0; t < ys.size(); ++t) {
    const double s = pred.stds[t];
    const double r = ys[t] - pred.means[t];
    grad(t, 0) = -r / (s * s) * inv_n;
    const double dloss_ds = (1.0 / s - r * r / (s * s * s)) * inv_n;
    grad(t, 1) = dloss_ds * sigmoid(raw(t, 1));
  }
  return HeadLoss{loss, std::move(grad)};
}

}  // namespace cnpcreep::cnp
