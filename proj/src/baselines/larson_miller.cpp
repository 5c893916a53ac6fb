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

#include "cnpcreep/baselines/larson_miller.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "cnpcreep/error.hpp"

namespace cnpcreep::baselines {

double rankine(double temp_c) {
  if (!(temp_c > -273.15)) throw DomainError("temperature must exceed -273.15 C");
  return (temp_c + 273.15) * 1.8;
}

double lm_parameter(double rupture_h, double temp_c, double c_lm) {
  if (!(rupture_h > 0.0)) throw DomainError("rupture time must be positive");
  return rankine(temp_c) * (c_lm + std::log10(rupture_h)) / 1000.0;
}

double lm_invert(double p_lm, double temp_c, double c_lm) {
  return std::pow(10.0, 1000.0 * p_lm / rankine(temp_c) - c_lm);
}

double LmModel::master_curve(double log10_stress) const {
  // Horner
  double acc = 0.0;
  for (std::size_t j = xi.size(); j-- > 0;) acc = acc * log10_stress + xi[j];
  return acc;
}

LmModel lm_fit(std::span<const LmObservation> records, int degree, double c_lm) {
  if (degree < 1) throw ConfigError("lm_fit: degree must be at least 1");
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  std::set<double> distinct;
  for (const auto& r : records) {
    if (!(r.stress_mpa > 0.0)) throw DomainError("lm_fit: stress must be positive");
    distinct.insert(std::log10(r.stress_mpa));
  }
  if (static_cast<Eigen::Index>(distinct.size()) < cols) {
    throw FitError("lm_fit: degree " + std::to_string(degree) + " needs " + std::to_string(cols) +
                   " distinct stresses, got " + std::to_string(distinct.size()));
  }

  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd design(n, cols);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    const double x = std::log10(r.stress_mpa);
    double power = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      design(i, j) = power;
      power *= x;
    }
    target(i) = lm_parameter(r.rupture_h, r.temp_c, c_lm);
  }

  // Unit-norm columns equalize the scale of x^0 .. x^d before factorizing.
  Eigen::VectorXd scale = design.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (scale(j) == 0.0) scale(j) = 1.0;
  }
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  if (qr.rank() < cols) throw FitError("lm_fit: design matrix is rank deficient");
  const Eigen::VectorXd coef = qr.solve(target).cwiseQuotient(scale);

  LmModel model;
  model.degree = degree;
  model.c_lm = c_lm;
  model.xi.assign(coef.data(), coef.data() + coef.size());
  for (double v : model.xi) {
    if (!std::isfinite(v)) throw FitError("lm_fit: non-finite coefficient");
  }
  return model;
}

double lm_predict_log10(const LmModel& model, double stress_mpa, double temp_c) {
  if (!(stress_mpa > 0.0)) throw DomainError("lm_predict: stress must be positive");
  return 1000.0 * model.master_curve(std::log10(stress_mpa)) / rankine(temp_c) - model.c_lm;
}

double lm_predict(const LmModel& model, double stress_mpa, double temp_c) {
  return std::pow(10.0, lm_predict_log10(model, stress_mpa, temp_c));
}

void to_json(nlohmann::json& j, const LmModel& m) {
  j = nlohmann::json{{"d", m.degree}, {"xi", m.xi}, {"c_lm", m.c_lm}};
}

void from_json(const nlohmann::json& j, LmModel& m) {
  m.degree = j.at("d").get<int>();
  m.xi = j.at("xi").get<std::vector<double>>();
  m.c_lm = j.value("c_lm", kDefaultCLm);
  if (m.xi.size() != static_cast<std::size_t>(m.degree + 1)) {
    throw ConfigError("LM model JSON: xi must have d + 1 entries");
  }
}

}  // namespace cnpcreep::baselines
