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

// Larson-Miller time-temperature parameter and its polynomial master curve.
//
//   P_LM = T_R * (C_LM + log10 t_r) / 1000,   T_R = (T_C + 273.15) * 1.8
//   P_LM = sum_j xi_j * (log10 sigma)^j,      j = 0..d
//
// All logarithms are base 10. Fitting pools every temperature of a cast code
// into a single regression of P_LM on log10 stress.

#pragma once

#include <span>
#include <vector>

#include <json.hpp>

namespace cnpcreep::baselines {

inline constexpr double kDefaultCLm = 20.0;

/// Celsius to Rankine.
double rankine(double temp_c);

/// Throws DomainError for t_r <= 0 or temperatures at or below absolute zero.
double lm_parameter(double rupture_h, double temp_c, double c_lm = kDefaultCLm);

/// Rupture time (hours) with the given P_LM at the given temperature.
double lm_invert(double p_lm, double temp_c, double c_lm = kDefaultCLm);

struct LmObservation {
  double stress_mpa;
  double temp_c;
  double rupture_h;
};

struct LmModel {
  int degree = 1;
  std::vector<double> xi;  ///< xi[j] multiplies (log10 sigma)^j
  double c_lm = kDefaultCLm;

  /// h_xi(log10 sigma)
  double master_curve(double log10_stress) const;
};

/// Ordinary least squares for xi. Uses a column-scaled Householder QR of the
/// Vandermonde design. Throws FitError when fewer than degree + 1 distinct
/// stresses are available.
LmModel lm_fit(std::span<const LmObservation> records, int degree, double c_lm = kDefaultCLm);

/// log10 of the predicted rupture time. Prefer this for metrics: the time
/// itself can overflow at very low stress.
double lm_predict_log10(const LmModel& model, double stress_mpa, double temp_c);

/// Predicted rupture time in hours; not clamped.
double lm_predict(const LmModel& model, double stress_mpa, double temp_c);

void to_json(nlohmann::json& j, const LmModel& m);
void from_json(const nlohmann::json& j, LmModel& m);

}  // namespace cnpcreep::baselines
