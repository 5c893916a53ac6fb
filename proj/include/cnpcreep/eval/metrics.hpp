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

// Accuracy and calibration metrics. All inputs are in log10 hours.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cnpcreep/cnp/gaussian.hpp"

namespace cnpcreep::eval {

inline constexpr double kP95Multiplier = 1.96;

/// Mean absolute error.
double mae(std::span<const double> y, std::span<const double> y_hat);

/// Mean per-point Gaussian log density; exactly -nll_loss.
double log_likelihood(const cnp::GaussianPrediction& pred, std::span<const double> y);

/// Fraction of y inside [mu - k sigma, mu + k sigma], bounds inclusive.
double coverage_p95(const cnp::GaussianPrediction& pred, std::span<const double> y,
                    double multiplier = kP95Multiplier);

/// 1 - SS_res / SS_tot. Throws NumericError for constant y.
double r_squared(std::span<const double> y, std::span<const double> y_hat);

/// Metrics of one run. `li` and `p95` are absent for deterministic models.
struct MetricsReport {
  double e = 0.0;
  std::optional<double> li;
  std::optional<double> p95;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Point-only models leave `stds` empty.
MetricsReport compute_metrics(std::span<const double> y, std::span<const double> means,
                              std::span<const double> stds, double multiplier = kP95Multiplier);

struct MetricSummary {
  double mean = 0.0;
  std::optional<double> std;  ///< sample (n - 1) std; absent for a single run
};

struct RunAggregate {
  MetricSummary e;
  std::optional<MetricSummary> li;
  std::optional<MetricSummary> p95;
  MetricSummary r2;
  std::size_t runs = 0;
};

/// Mean and sample std per metric, accumulated in run order.
RunAggregate aggregate(std::span<const MetricsReport> runs);

MetricSummary summarize(std::span<const double> values);

}  // namespace cnpcreep::eval
