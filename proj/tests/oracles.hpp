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

// Deliberately naive reference implementations shared by the unit and
// acceptance tests. None of this touches the library's numerics.

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

/// Gauss-Jordan inverse with partial pivoting.
inline Dense inverse(Dense a) {
  const std::size_t n = a.size();
  Dense inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) throw std::runtime_error("singular");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

inline double rbf(const std::vector<double>& a, const std::vector<double>& b, double ell, double s2) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d2 += (a[k] - b[k]) * (a[k] - b[k]);
  return s2 * std::exp(-d2 / (2.0 * ell * ell));
}

struct GpOut {
  double mean;
  double var;  ///< of a noisy observation
};

/// mean = k*^T A^-1 y, var = s2 - k*^T A^-1 k* + diag, with A = K + diag I.
inline GpOut gp_posterior(const std::vector<std::vector<double>>& xs, const std::vector<double>& ys,
                          const std::vector<double>& xq, double ell, double s2, double diag) {
  const std::size_t n = xs.size();
  Dense a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rbf(xs[i], xs[j], ell, s2) + (i == j ? diag : 0.0);
  const auto ainv = inverse(a);
  std::vector<double> ks(n);
  for (std::size_t i = 0; i < n; ++i) ks[i] = rbf(xq, xs[i], ell, s2);
  double mean = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mean += ks[i] * ainv[i][j] * ys[j];
      quad += ks[i] * ainv[i][j] * ks[j];
    }
  return {mean, s2 - quad + diag};
}

inline double mae(const std::vector<double>& y, const std::vector<double>& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(y[i] - m[i]);
  return s / static_cast<double>(y.size());
}

inline double r2(const std::vector<double>& y, const std::vector<double>& m) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double res = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    res += (y[i] - m[i]) * (y[i] - m[i]);
    tot += (y[i] - mean) * (y[i] - mean);
  }
  return 1.0 - res / tot;
}

}  // namespace oracle
