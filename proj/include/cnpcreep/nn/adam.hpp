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

#include <cstdint>

#include "cnpcreep/nn/mlp.hpp"

namespace cnpcreep::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct AdamState {
  MlpParams m;
  MlpParams v;
  std::uint64_t t = 0;
  AdamConfig config;

  /// Zero moments shaped like `params`.
  static AdamState for_params(const MlpParams& params, const AdamConfig& config = {});
};

/// One bias-corrected Adam update, in place. Throws NumericError before
/// touching anything if a gradient component is not finite.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

}  // namespace cnpcreep::nn
