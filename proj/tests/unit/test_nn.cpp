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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "cnpcreep/error.hpp"
#include "cnpcreep/nn/adam.hpp"
#include "cnpcreep/nn/gradcheck.hpp"
#include "cnpcreep/nn/matrix.hpp"
#include "cnpcreep/nn/mlp.hpp"
#include "cnpcreep/random.hpp"

using namespace cnpcreep;
using namespace cnpcreep::nn;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (auto& v : m.data()) v = rng.uniform(-1.0, 1.0);
  return m;
}

MlpParams random_net(std::vector<std::size_t> widths, Activation act, Rng& rng) {
  auto p = init_mlp(widths, act, rng);
  // Nonzero biases so the bias path is exercised too.
  for (auto& l : p.layers)
    for (auto& b : l.bias) b = rng.uniform(-0.5, 0.5);
  return p;
}

// Independent per-element evaluation.
std::vector<std::vector<double>> naive_forward(const MlpParams& p, const Matrix& x) {
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::vector<double> h(x.row(r).begin(), x.row(r).end());
    for (std::size_t k = 0; k < p.layers.size(); ++k) {
      const auto& L = p.layers[k];
      std::vector<double> z(L.outputs());
      for (std::size_t j = 0; j < L.outputs(); ++j) {
        double s = L.bias[j];
        for (std::size_t i = 0; i < L.inputs(); ++i) s += h[i] * L.weight(i, j);
        const bool last = k + 1 == p.layers.size();
        z[j] = last ? s : (p.activation == Activation::tanh ? std::tanh(s) : std::max(0.0, s));
      }
      h = z;
    }
    out.push_back(h);
  }
  return out;
}

// Loss = sum(output .* weights) so grad_output = weights.
double weighted_sum(const Matrix& out, const Matrix& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += out.data()[i] * w.data()[i];
  return s;
}

bool relu_near_kink(const MlpParams& p, const Matrix& x) {
  if (p.activation != Activation::relu) return false;
  const auto fwd = mlp_forward(p, x);
  for (std::size_t k = 0; k + 1 < fwd.cache.pre.size(); ++k)
    for (double v : fwd.cache.pre[k].data())
      if (std::abs(v) < 1e-3) return true;
  return false;
}

}  // namespace

TEST_CASE("matrix rejects empty shapes") {
  CHECK_THROWS_AS(Matrix(0, 3), DimensionError);
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>(3)), DimensionError);
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), DimensionError);
}

TEST_CASE("matmul variants agree with explicit transposes") {
  Rng rng(1);
  const auto a = random_matrix(4, 3, rng);
  const auto b = random_matrix(4, 5, rng);
  const auto tn = matmul_tn(a, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += a(k, i) * b(k, j);
      CHECK(tn(i, j) == doctest::Approx(s).epsilon(1e-14));
    }
  const auto c = random_matrix(6, 3, rng);
  const auto nt = matmul_nt(a, c);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * c(j, k);
      CHECK(nt(i, j) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("single identity layer passes input through") {
  MlpParams p;
  p.layers.push_back(Layer{Matrix::identity(3), {0.0, 0.0, 0.0}});
  Rng rng(2);
  const auto x = random_matrix(5, 3, rng);
  CHECK(mlp_apply(p, x) == x);
}

TEST_CASE("zero tanh network outputs zeros") {
  MlpParams p;
  p.layers.push_back(Layer{Matrix(2, 4), std::vector<double>(4, 0.0)});
  p.layers.push_back(Layer{Matrix(4, 1), {0.0}});
  Rng rng(3);
  const auto out = mlp_apply(p, random_matrix(6, 2, rng));
  for (double v : out.data()) CHECK(v == 0.0);
}

TEST_CASE("forward matches a naive per-element loop") {
  Rng rng(4);
  for (auto act : {Activation::tanh, Activation::relu}) {
    const auto p = random_net({3, 7, 5, 2}, act, rng);
    const auto x = random_matrix(9, 3, rng);
    const auto out = mlp_apply(p, x);
    const auto ref = naive_forward(p, x);
    for (std::size_t r = 0; r < 9; ++r)
      for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(out(r, c) - ref[r][c]) <= 1e-12);
  }
}

TEST_CASE("batch forward equals stacked row forwards") {
  Rng rng(5);
  const auto p = random_net({4, 8, 8, 3}, Activation::tanh, rng);
  const auto x = random_matrix(7, 4, rng);
  const auto batch = mlp_apply(p, x);
  for (std::size_t r = 0; r < 7; ++r) {
    Matrix one(1, 4);
    for (std::size_t c = 0; c < 4; ++c) one(0, c) = x(r, c);
    const auto single = mlp_apply(p, one);
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(single(0, c) - batch(r, c)) <= 1e-12);
  }
}

TEST_CASE("forward names the offending layer on a width mismatch") {
  Rng rng(6);
  const auto p = random_net({3, 4, 1}, Activation::tanh, rng);
  try {
    mlp_apply(p, Matrix(2, 5));
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("layer 0") != std::string::npos);
  }
}

TEST_CASE("zero output gradient gives zero parameter gradients") {
  Rng rng(7);
  const auto p = random_net({3, 6, 2}, Activation::tanh, rng);
  const auto fwd = mlp_forward(p, random_matrix(4, 3, rng));
  const auto back = mlp_backward(p, fwd.cache, Matrix(4, 2));
  for (double g : flatten(back.grads)) CHECK(g == 0.0);
}

TEST_CASE("linear net: d output / d weight equals the input") {
  MlpParams p;
  p.layers.push_back(Layer{Matrix(3, 1, 0.3), {0.1}});
  const auto x = Matrix::from_rows({{1.5, -2.0, 0.25}});
  const auto fwd = mlp_forward(p, x);
  const auto back = mlp_backward(p, fwd.cache, Matrix(1, 1, 1.0));
  CHECK(back.grads.layers[0].weight(0, 0) == 1.5);
  CHECK(back.grads.layers[0].weight(1, 0) == -2.0);
  CHECK(back.grads.layers[0].weight(2, 0) == 0.25);
  CHECK(back.grads.layers[0].bias[0] == 1.0);
}

TEST_CASE("backward rejects a stale cache") {
  Rng rng(8);
  const auto p = random_net({3, 4, 2}, Activation::tanh, rng);
  const auto q = random_net({3, 5, 2}, Activation::tanh, rng);
  const auto fwd = mlp_forward(q, random_matrix(2, 3, rng));
  CHECK_THROWS_AS(mlp_backward(p, fwd.cache, Matrix(2, 2)), DimensionError);
}

TEST_CASE("backward matches finite differences for both activations") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto act = trial % 2 == 0 ? Activation::tanh : Activation::relu;
    const std::size_t depth = 1 + rng.index(3);
    std::vector<std::size_t> widths{1 + rng.index(4)};
    for (std::size_t k = 0; k < depth; ++k) widths.push_back(1 + rng.index(16));
    const auto p = random_net(widths, act, rng);
    const auto x = random_matrix(3, widths.front(), rng);
    if (relu_near_kink(p, x)) continue;
    const auto w = random_matrix(3, widths.back(), rng);
    const auto fwd = mlp_forward(p, x);
    const auto analytic = mlp_backward(p, fwd.cache, w).grads;
    const auto numeric = finite_diff_grad([&](const MlpParams& q) { return weighted_sum(mlp_apply(q, x), w); }, p, 1e-6);
    CHECK(max_relative_error(flatten(analytic), flatten(numeric)) < 1e-5);
  }
}

TEST_CASE("input gradient matches finite differences") {
  Rng rng(10);
  const auto p = random_net({3, 8, 2}, Activation::tanh, rng);
  const auto x = random_matrix(2, 3, rng);
  const auto w = random_matrix(2, 2, rng);
  const auto back = mlp_backward(p, mlp_forward(p, x).cache, w);
  const auto numeric = finite_diff_grad(
      [&](std::span<const double> flat) {
        Matrix xi(2, 3, std::vector<double>(flat.begin(), flat.end()));
        return weighted_sum(mlp_apply(p, xi), w);
      },
      x.data(), 1e-6);
  CHECK(max_relative_error(std::vector<double>(back.input_grad.data().begin(), back.input_grad.data().end()),
                           numeric) < 1e-6);
}

TEST_CASE("flatten and unflatten round trip") {
  Rng rng(11);
  const auto p = random_net({2, 3, 1}, Activation::relu, rng);
  auto q = p.zeros_like();
  unflatten(flatten(p), q);
  CHECK(q == p);
  CHECK(flatten(p).size() == p.parameter_count());
  CHECK(p.parameter_count() == 2 * 3 + 3 + 3 * 1 + 1);
}

TEST_CASE("json round trip is exact") {
  Rng rng(12);
  const auto p = random_net({2, 5, 2}, Activation::relu, rng);
  nlohmann::json j = p;
  const auto q = nlohmann::json::parse(j.dump()).get<MlpParams>();
  CHECK(q == p);
}

TEST_CASE("glorot init stays inside its bound with zero biases") {
  Rng rng(13);
  const std::vector<std::size_t> widths{10, 30, 5};
  const auto p = init_mlp(widths, Activation::tanh, rng);
  for (std::size_t k = 0; k < 2; ++k) {
    const double bound = std::sqrt(6.0 / static_cast<double>(widths[k] + widths[k + 1]));
    for (double v : p.layers[k].weight.data()) CHECK(std::abs(v) <= bound);
    for (double b : p.layers[k].bias) CHECK(b == 0.0);
  }
}

TEST_CASE("adam: zero gradient leaves parameters and bumps t") {
  Rng rng(14);
  auto p = random_net({2, 3, 1}, Activation::tanh, rng);
  const auto before = p;
  auto state = AdamState::for_params(p);
  adam_step(p, p.zeros_like(), state);
  CHECK(p == before);
  CHECK(state.t == 1);
}

TEST_CASE("adam: first step moves each coordinate by about lr") {
  Rng rng(15);
  auto p = random_net({2, 4, 1}, Activation::tanh, rng);
  const auto before = flatten(p);
  auto g = p.zeros_like();
  auto gflat = flatten(g);
  for (auto& v : gflat) v = rng.uniform(0.1, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
  unflatten(gflat, g);
  auto state = AdamState::for_params(p);
  adam_step(p, g, state);
  const auto after = flatten(p);
  for (std::size_t i = 0; i < after.size(); ++i) {
    const double expected = -1e-3 * gflat[i] / (std::abs(gflat[i]) + 1e-8);
    CHECK(after[i] - before[i] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("adam: reduces a quadratic and is deterministic") {
  Rng rng(16);
  auto p = random_net({3, 4, 2}, Activation::tanh, rng);
  const auto target = flatten(random_net({3, 4, 2}, Activation::tanh, rng));
  auto loss = [&](const MlpParams& q) {
    const auto f = flatten(q);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - target[i]) * (f[i] - target[i]);
    return s;
  };
  const double start = loss(p);
  auto state = AdamState::for_params(p, AdamConfig{0.01});
  auto q = p;
  auto state_q = state;
  for (int step = 0; step < 100; ++step) {
    auto g = p.zeros_like();
    auto f = flatten(p);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0 * (f[i] - target[i]);
    unflatten(f, g);
    adam_step(p, g, state);
    adam_step(q, g, state_q);
    REQUIRE(p == q);
  }
  CHECK(loss(p) < start);
  CHECK(state.m == state_q.m);
  CHECK(state.v == state_q.v);
}

TEST_CASE("adam: non-finite gradient raises and leaves state untouched") {
  Rng rng(17);
  auto p = random_net({2, 2, 1}, Activation::tanh, rng);
  const auto before = p;
  auto state = AdamState::for_params(p);
  auto g = p.zeros_like();
  g.layers[1].bias[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam_step(p, g, state), NumericError);
  CHECK(p == before);
  CHECK(state.t == 0);
}

TEST_CASE("adam config validation") {
  CHECK_THROWS_AS(AdamConfig({0.0}).validate(), ConfigError);
  CHECK_THROWS_AS(AdamConfig({1e-3, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(AdamConfig({1e-3, 0.9, 0.999, 0.0}).validate(), ConfigError);
}

TEST_CASE("finite differences on simple functions") {
  Rng rng(18);
  const auto p = random_net({3, 4, 2}, Activation::tanh, rng);
  const auto ones = finite_diff_grad(
      [](const MlpParams& q) {
        double s = 0.0;
        for (double v : flatten(q)) s += v;
        return s;
      },
      p, 1e-6);
  for (double g : flatten(ones)) CHECK(std::abs(g - 1.0) < 1e-9);
  const auto twice = finite_diff_grad(
      [](const MlpParams& q) {
        double s = 0.0;
        for (double v : flatten(q)) s += v * v;
        return s;
      },
      p, 1e-6);
  const auto pf = flatten(p), tf = flatten(twice);
  for (std::size_t i = 0; i < pf.size(); ++i) CHECK(std::abs(tf[i] - 2.0 * pf[i]) < 1e-6);
}

TEST_CASE("finite differences refuse a non-finite probe") {
  const std::vector<double> x{1.0};
  CHECK_THROWS_AS(finite_diff_grad([](std::span<const double> v) { return std::log(v[0] - 1.0); }, x, 1e-3),
                  NumericError);
}

TEST_CASE("rng is reproducible and samples without replacement") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = c.sample_without_replacement(10, 6);
    std::sort(s.begin(), s.end());
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    CHECK(s.back() < 10);
  }
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2, 0) == derive_seed(1, 2));
}
