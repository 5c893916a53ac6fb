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

#include "cnpcreep/baselines/gaussian_process.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "cnpcreep/error.hpp"

namespace cnpcreep::baselines {

GpGrid GpGrid::defaults() {
  GpGrid g;
  for (int k = 0; k < 10; ++k) g.lengthscales.push_back(0.1 * std::pow(30.0, k / 9.0));
  return g;
}

double se_kernel(const std::vector<double>& a, const std::vector<double>& b, const GpHyper& h) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    d2 += d * d;
  }
  return h.signal_variance * std::exp(-0.5 * d2 / (h.lengthscale * h.lengthscale));
}

namespace {
void check_hyper(const GpHyper& h) {
  if (!(h.lengthscale > 0.0) || !(h.signal_variance > 0.0) || !(h.noise_variance >= 0.0)) {
    throw ConfigError("gp: need lengthscale > 0, signal variance > 0, noise variance >= 0");
  }
}
}  // namespace

GpModel::GpModel(const cnp::ContextSet& context, const GpHyper& hyper) : context_(context), hyper_(hyper) {
  check_hyper(hyper);
  const auto n = static_cast<Eigen::Index>(context.points.size());
  if (n == 0) throw ConfigError("gp: context set is empty");
  const std::size_t d = context.points.front().x.size();
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pi = context.points[static_cast<std::size_t>(i)];
    if (pi.x.size() != d) throw DimensionError("gp: context points disagree on feature count");
    y(i) = pi.y;
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = k(j, i) = se_kernel(pi.x, context.points[static_cast<std::size_t>(j)].x, hyper);
    }
    k(i, i) += hyper.noise_variance + kGpJitter;
  }
  chol_.compute(k);
  if (chol_.info() != Eigen::Success) throw FitError("gp: kernel matrix is not positive definite");
  alpha_ = chol_.solve(y);
  const Eigen::MatrixXd l = chol_.matrixL();
  double log_det_half = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(l(i, i) > 0.0)) throw FitError("gp: degenerate Cholesky factor");
    log_det_half += std::log(l(i, i));
  }
  log_marginal_ = -0.5 * y.dot(alpha_) - log_det_half - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  if (!std::isfinite(log_marginal_)) throw FitError("gp: non-finite log marginal likelihood");
}

cnp::GaussianPrediction GpModel::predict(const cnp::TargetSet& query) const {
  if (query.xs.empty()) throw DimensionError("gp: query set is empty");
  const std::size_t d = context_.points.front().x.size();
  const auto n = static_cast<Eigen::Index>(context_.points.size());
  cnp::GaussianPrediction out;
  out.means.reserve(query.xs.size());
  out.stds.reserve(query.xs.size());
  Eigen::VectorXd ks(n);
  for (std::size_t t = 0; t < query.xs.size(); ++t) {
    const auto& x = query.xs[t];
    if (x.size() != d) {
      throw DimensionError("gp: query " + std::to_string(t) + " has " + std::to_string(x.size()) +
                           " features, expected " + std::to_string(d));
    }
    for (Eigen::Index i = 0; i < n; ++i) ks(i) = se_kernel(x, context_.points[static_cast<std::size_t>(i)].x, hyper_);
    const Eigen::VectorXd v = chol_.matrixL().solve(ks);
    double latent = hyper_.signal_variance - v.squaredNorm();
    if (latent < 0.0) {
      if (latent < -1e-10) throw NumericError("gp: negative predictive variance " + std::to_string(latent));
      latent = 0.0;
    }
    out.means.push_back(ks.dot(alpha_));
    out.stds.push_back(std::sqrt(latent + hyper_.noise_variance + kGpJitter));
  }
  return out;
}

GpModel gp_fit(const cnp::ContextSet& context, const GpGrid& grid) {
  if (context.points.empty()) throw ConfigError("gp_fit: context set is empty");
  if (grid.lengthscales.empty() || grid.signal_variances.empty() || grid.noise_variances.empty()) {
    throw ConfigError("gp_fit: hyperparameter grid is empty");
  }
  std::optional<GpModel> best;
  for (double l : grid.lengthscales) {
    for (double s2 : grid.signal_variances) {
      for (double n2 : grid.noise_variances) {
        try {
          GpModel m(context, GpHyper{l, s2, n2});
          if (!best || m.log_marginal_likelihood() > best->log_marginal_likelihood()) best = std::move(m);
        } catch (const FitError&) {
          continue;
        }
      }
    }
  }
  if (!best) throw FitError("gp_fit: no grid point gave a positive definite kernel matrix");
  return std::move(*best);
}

cnp::GaussianPrediction gp_predict(const GpModel& model, const cnp::TargetSet& query) { return model.predict(query); }

void to_json(nlohmann::json& j, const GpHyper& h) {
  j = nlohmann::json{{"lengthscale", h.lengthscale},
                     {"signal_variance", h.signal_variance},
                     {"noise_variance", h.noise_variance}};
}

void from_json(const nlohmann::json& j, GpHyper& h) {
  h.lengthscale = j.at("lengthscale").get<double>();
  h.signal_variance = j.at("signal_variance").get<double>();
  h.noise_variance = j.at("noise_variance").get<double>();
}

void to_json(nlohmann::json& j, const GpGrid& g) {
  j = nlohmann::json{{"lengthscales", g.lengthscales},
                     {"signal_variances", g.signal_variances},
                     {"noise_variances", g.noise_variances}};
}

void from_json(const nlohmann::json& j, GpGrid& g) {
  const GpGrid d = GpGrid::defaults();
  g.lengthscales = j.value("lengthscales", d.lengthscales);
  g.signal_variances = j.value("signal_variances", d.signal_variances);
  g.noise_variances = j.value("noise_variances", d.noise_variances);
}

void to_json(nlohmann::json& j, const GpModel& m) {
  nlohmann::json ctx = nlohmann::json::array();
  for (const auto& p : m.context().points) ctx.push_back({{"x", p.x}, {"y", p.y}});
  j = nlohmann::json{{"hyper", m.hyper()}, {"context", std::move(ctx)}};
}

GpModel gp_model_from_json(const nlohmann::json& j) {
  cnp::ContextSet ctx;
  for (const auto& p : j.at("context")) {
    ctx.points.push_back(cnp::LabeledPoint{p.at("x").get<std::vector<double>>(), p.at("y").get<double>()});
  }
  return GpModel(ctx, j.at("hyper").get<GpHyper>());
}

}  // namespace cnpcreep::baselines
