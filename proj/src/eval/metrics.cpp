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

#include "cnpcreep/eval/metrics.hpp"

#include <cmath>

#include "cnpcreep/error.hpp"

namespace cnpcreep::eval {

namespace {
void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
  }
  if (a == 0) throw DimensionError(std::string(what) + ": no points");
}
}  // namespace

double mae(std::span<const double> y, std::span<const double> y_hat) {
  check_lengths(y.size(), y_hat.size(), "mae");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) total += std::abs(y[i] - y_hat[i]);
  return total / static_cast<double>(y.size());
}

double log_likelihood(const cnp::GaussianPrediction& pred, std::span<const double> y) {
  return -cnp::nll_loss(pred, y);
}

double coverage_p95(const cnp::GaussianPrediction& pred, std::span<const double> y, double multiplier) {
  check_lengths(pred.means.size(), y.size(), "coverage_p95");
  check_lengths(pred.stds.size(), y.size(), "coverage_p95");
  std::size_t captured = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double lo = pred.means[i] - multiplier * pred.stds[i];
    const double hi = pred.means[i] + multiplier * pred.stds[i];
    if (y[i] >= lo && y[i] <= hi) ++captured;
  }
  return static_cast<double>(captured) / static_cast<double>(y.size());
}

double r_squared(std::span<const double> y, std::span<const double> y_hat) {
  check_lengths(y.size(), y_hat.size(), "r_squared");
  if (y.size() < 2) throw NumericError("r_squared: need at least two points");
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
  }
  if (ss_tot == 0.0) throw NumericError("r_squared: undefined for constant targets");
  return 1.0 - ss_res / ss_tot;
}

MetricsReport compute_metrics(std::span<const double> y, std::span<const double> means,
                              std::span<const double> stds, double multiplier) {
  MetricsReport r;
  r.n = y.size();
  r.e = mae(y, means);
  r.r2 = r_squared(y, means);
  if (!stds.empty()) {
    cnp::GaussianPrediction pred{{means.begin(), means.end()}, {stds.begin(), stds.end()}};
    r.li = log_likelihood(pred, y);
    r.p95 = coverage_p95(pred, y, multiplier);
  }
  return r;
}

MetricSummary summarize(std::span<const double> values) {
  if (values.empty()) throw DimensionError("summarize: no values");
  MetricSummary s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

RunAggregate aggregate(std::span<const MetricsReport> runs) {
  if (runs.empty()) throw DimensionError("aggregate: no runs");
  std::vector<double> e, li, p95, r2;
  for (const auto& r : runs) {
    e.push_back(r.e);
    r2.push_back(r.r2);
    if (r.li) li.push_back(*r.li);
    if (r.p95) p95.push_back(*r.p95);
  }
  RunAggregate a;
  a.runs = runs.size();
  a.e = summarize(e);
  a.r2 = summarize(r2);
  if (!li.empty()) a.li = summarize(li);
  if (!p95.empty()) a.p95 = summarize(p95);
  return a;
}

}  // namespace cnpcreep::eval
