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

#include "cnpcreep/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "cnpcreep/error.hpp"

namespace cnpcreep::nn {

std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> point, double step) {
  if (!(step > 0.0)) throw ConfigError("finite_diff_grad: step must be positive");
  std::vector<double> probe(point.begin(), point.end());
  std::vector<double> grad(point.size());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double original = probe[i];
    probe[i] = original + step;
    const double up = f(probe);
    probe[i] = original - step;
    const double down = f(probe);
    probe[i] = original;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_diff_grad: function not finite near parameter " + std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

MlpParams finite_diff_grad(const std::function<double(const MlpParams&)>& f, const MlpParams& params,
                           double step) {
  MlpParams scratch = params;
  auto flat_f = [&](std::span<const double> flat) {
    unflatten(flat, scratch);
    return f(scratch);
  };
  const auto flat = flatten(params);
  const auto grad = finite_diff_grad(flat_f, flat, step);
  MlpParams out = params.zeros_like();
  unflatten(grad, out);
  return out;
}

double max_relative_error(std::span<const double> a, std::span<const double> b, double floor) {
  if (a.size() != b.size()) throw DimensionError("max_relative_error: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace cnpcreep::nn
