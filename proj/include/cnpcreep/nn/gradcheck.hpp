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

#include <functional>
#include <span>
#include <vector>

#include "cnpcreep/nn/mlp.hpp"

namespace cnpcreep::nn {

/// Central-difference gradient of a scalar function of a flat parameter vector.
/// Throws NumericError if `f` is not finite at a probe point.
std::vector<double> finite_diff_grad(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> point, double step);

/// Same, for a function of network parameters. Result is shaped like `params`.
MlpParams finite_diff_grad(const std::function<double(const MlpParams&)>& f, const MlpParams& params,
                           double step);

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor). The floor keeps components
/// that are both ~0 from dominating the ratio.
double max_relative_error(std::span<const double> a, std::span<const double> b, double floor = 1e-6);

}  // namespace cnpcreep::nn
