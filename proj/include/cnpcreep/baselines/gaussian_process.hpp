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

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cnpcreep/cnp/cnp.hpp"

namespace cnpcreep::baselines {

/// Squared-exponential kernel k(a, b) = s2 * exp(-|a - b|^2 / (2 l^2)) plus
/// i.i.d. observation noise n2.
struct GpHyper {
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 1e-2;

  friend bool operator==(const GpHyper&, const GpHyper&) = default;
};

struct GpGrid {
  std::vector<double> lengthscales;
  std::vector<double> signal_variances{0.25, 1.0, 4.0};
  std::vector<double> noise_variances{1e-4, 1e-2, 1e-1};

  /// Ten log-spaced lengthscales in [0.1, 3] and the variance sets above.
  static GpGrid defaults();
};

/// Added to the kernel diagonal (and to the predictive variance) on every fit.
inline constexpr double kGpJitter = 1e-9;

double se_kernel(const std::vector<double>& a, const std::vector<double>& b, const GpHyper& h);

/// Exact GP posterior conditioned on a context set. Zero prior mean.
class GpModel {
 public:
  /// Throws FitError if K + (n2 + jitter) I is not positive definite.
  GpModel(const cnp::ContextSet& context, const GpHyper& hyper);

  const GpHyper& hyper() const noexcept { return hyper_; }
  const cnp::ContextSet& context() const noexcept { return context_; }
  double log_marginal_likelihood() const noexcept { return log_marginal_; }

  /// Posterior of noisy observations: the latent variance plus n2.
  cnp::GaussianPrediction predict(const cnp::TargetSet& query) const;

 private:
  cnp::ContextSet context_;
  GpHyper hyper_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
  double log_marginal_ = 0.0;
};

/// Grid search on the exact log marginal likelihood. Ties keep the first
/// grid point in (lengthscale, signal, noise) order. Non-PD grid points are
/// skipped; FitError if none succeeds.
GpModel gp_fit(const cnp::ContextSet& context, const GpGrid& grid);

cnp::GaussianPrediction gp_predict(const GpModel& model, const cnp::TargetSet& query);

void to_json(nlohmann::json& j, const GpHyper& h);
void from_json(const nlohmann::json& j, GpHyper& h);
void to_json(nlohmann::json& j, const GpGrid& g);
void from_json(const nlohmann::json& j, GpGrid& g);
/// Hyperparameters plus the conditioning context; the factorization is rebuilt on load.
void to_json(nlohmann::json& j, const GpModel& m);
GpModel gp_model_from_json(const nlohmann::json& j);

}  // namespace cnpcreep::baselines
