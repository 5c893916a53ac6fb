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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cnpcreep/data/records.hpp"
#include "cnpcreep/eval/predictors.hpp"

namespace cnpcreep::eval {

inline constexpr double kBandMultiplier = 2.0;

/// One CSV row. For kind "curve" mu is the predicted mean and lo2s/hi2s the
/// band; for "context"/"target" rows mu is the observed log10 t_r and the
/// band collapses onto it. Point-only models also get a collapsed band.
struct PlotRow {
  double temperature_c = 0.0;
  double log10_stress = 0.0;
  double mu = 0.0;
  double lo2s = 0.0;
  double hi2s = 0.0;
  std::string kind;

  friend bool operator==(const PlotRow&, const PlotRow&) = default;
};

/// Curve rows for every (temperature, grid point), temperature-major, then
/// one row per context and per target record.
std::vector<PlotRow> export_plot_data(const Predictor& model, std::span<const data::CreepRecord> context,
                                      std::span<const data::CreepRecord> targets,
                                      std::span<const double> temperatures_c,
                                      std::span<const double> log10_stress_grid,
                                      double band_multiplier = kBandMultiplier);

/// `points` evenly spaced values from lo to hi inclusive (just lo if points == 1).
std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Header: temperature_c,log10_stress,mu,lo2s,hi2s,kind. Reals at 17 significant digits.
void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows);
std::vector<PlotRow> read_plot_csv(std::istream& in);

}  // namespace cnpcreep::eval
