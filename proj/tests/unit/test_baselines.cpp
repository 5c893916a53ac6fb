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

#include "cnpcreep/baselines/gaussian_process.hpp"
#include "cnpcreep/baselines/larson_miller.hpp"
#include "cnpcreep/baselines/pooled.hpp"
#include "cnpcreep/data/features.hpp"
#include "cnpcreep/data/split.hpp"
#include "cnpcreep/data/synthetic.hpp"
#include "cnpcreep/error.hpp"
#include "cnpcreep/eval/predictors.hpp"
#include "cnpcreep/random.hpp"
#include "oracles.hpp"

using namespace cnpcreep;
using namespace cnpcreep::baselines;

namespace {

// Temperature giving exactly 1000 R.
constexpr double kT1000 = 1000.0 / 1.8 - 273.15;

std::vector<LmObservation> from_model(const std::vector<double>& xi, std::size_t n, Rng& rng) {
  LmModel truth{static_cast<int>(xi.size()) - 1, xi, 20.0};
  std::vector<LmObservation> obs;
  for (std::size_t i = 0; i < n; ++i) {
    const double stress = std::pow(10.0, rng.uniform(1.7, 2.7));
    const double temp = 450.0 + 50.0 * static_cast<double>(rng.index(5));
    obs.push_back({stress, temp, lm_invert(truth.master_curve(std::log10(stress)), temp, 20.0)});
  }
  return obs;
}

cnp::ContextSet random_context(std::size_t n, Rng& rng) {
  cnp::ContextSet c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.normal()});
  return c;
}

}  // namespace

TEST_CASE("larson-miller parameter anchors") {
  CHECK(rankine(kT1000) == doctest::Approx(1000.0).epsilon(1e-15));
  CHECK(lm_parameter(1.0, kT1000) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(lm_parameter(10.0, kT1000) == doctest::Approx(21.0).epsilon(1e-15));
  CHECK_THROWS_AS(lm_parameter(0.0, 500.0), DomainError);
  CHECK_THROWS_AS(lm_parameter(-1.0, 500.0), DomainError);
  CHECK_THROWS_AS(rankine(-300.0), DomainError);
}

TEST_CASE("larson-miller parameter inverts and is increasing") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double t = std::pow(10.0, rng.uniform(-1, 6));
    const double temp = rng.uniform(300, 800);
    const double p = lm_parameter(t, temp);
    CHECK(std::abs(lm_invert(p, temp) - t) / t < 1e-10);
    CHECK(lm_parameter(t * 1.01, temp) > p);
    CHECK(lm_parameter(t, temp + 1.0) > p);
  }
}

TEST_CASE("lm_fit recovers a known linear master curve") {
  Rng rng(2);
  const auto obs = from_model({25.0, -3.0}, 30, rng);
  const auto m = lm_fit(obs, 1);
  CHECK(std::abs(m.xi[0] - 25.0) < 1e-8);
  CHECK(std::abs(m.xi[1] + 3.0) < 1e-8);
  for (const auto& o : obs) {
    CHECK(std::abs(m.master_curve(std::log10(o.stress_mpa)) - lm_parameter(o.rupture_h, o.temp_c)) < 1e-10);
  }
}

TEST_CASE("lm_fit round trip for degrees one to three") {
  Rng rng(3);
  const std::vector<std::vector<double>> truths{{30.0, -4.0}, {28.0, -2.0, -0.5}, {26.0, 1.0, -1.5, 0.2}};
  for (const auto& xi : truths) {
    const auto obs = from_model(xi, 25, rng);
    const int d = static_cast<int>(xi.size()) - 1;
    const auto m = lm_fit(obs, d);
    for (std::size_t j = 0; j < xi.size(); ++j) CHECK(std::abs(m.xi[j] - xi[j]) < 1e-6);
    for (const auto& o : obs) {
      CHECK(std::abs(lm_predict(m, o.stress_mpa, o.temp_c) - o.rupture_h) / o.rupture_h < 1e-8);
    }
  }
}

TEST_CASE("two points with degree one are interpolated") {
  const std::vector<LmObservation> obs{{100.0, 550.0, 1000.0}, {200.0, 600.0, 50.0}};
  const auto m = lm_fit(obs, 1);
  for (const auto& o : obs) CHECK(lm_predict(m, o.stress_mpa, o.temp_c) == doctest::Approx(o.rupture_h).epsilon(1e-9));
}

TEST_CASE("a quadratic fit to linear data has a vanishing leading term") {
  Rng rng(4);
  const auto obs = from_model({25.0, -3.0}, 20, rng);
  const auto m = lm_fit(obs, 2);
  CHECK(std::abs(m.xi[2]) < 1e-6);
}

TEST_CASE("lm_fit needs enough distinct stresses") {
  const std::vector<LmObservation> same{{100.0, 500.0, 10.0}, {100.0, 550.0, 5.0}, {100.0, 600.0, 1.0}};
  CHECK_THROWS_AS(lm_fit(same, 1), FitError);
  const std::vector<LmObservation> two{{100.0, 500.0, 10.0}, {120.0, 550.0, 5.0}};
  CHECK_THROWS_AS(lm_fit(two, 2), FitError);
  CHECK_NOTHROW(lm_fit(two, 1));
}

TEST_CASE("lm_predict anchors") {
  LmModel flat{1, {20.0, 0.0}, 20.0};
  CHECK(lm_predict(flat, 123.0, kT1000) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lm_predict(flat, 50.0, 600.0) == lm_predict(flat, 400.0, 600.0));
  CHECK_THROWS_AS(lm_predict(flat, 0.0, 600.0), DomainError);
  // Large lives come back unclamped.
  LmModel steep{1, {60.0, 0.0}, 20.0};
  CHECK(lm_predict(steep, 100.0, kT1000) == doctest::Approx(1e40).epsilon(1e-9));
}

TEST_CASE("lm training error does not grow with degree") {
  data::SyntheticTaskConfig cfg;
  cfg.mode = data::SyntheticMode::larson_miller;
  cfg.task_count = 15;
  cfg.seed = 5;
  for (const auto& task : data::synth_tasks(cfg)) {
    std::vector<LmObservation> obs;
    for (const auto& r : task.records) obs.push_back({r.stress_mpa, r.temp_c, r.rupture_h});
    double prev = std::numeric_limits<double>::infinity();
    for (int d = 1; d <= 3; ++d) {
      const auto m = lm_fit(obs, d);
      // The fit minimizes squared P_LM residuals, so that is the monotone quantity.
      double sse = 0.0;
      for (const auto& o : obs) {
        const double r = m.master_curve(std::log10(o.stress_mpa)) - lm_parameter(o.rupture_h, o.temp_c);
        sse += r * r;
      }
      CHECK(sse <= prev * (1.0 + 1e-9));
      prev = sse;
    }
  }
}

TEST_CASE("gp one point posterior has the closed form") {
  const cnp::ContextSet ctx{{{{0.2, -0.4}, 1.7}}};
  for (double s2 : {0.25, 1.0, 4.0}) {
    for (double n2 : {1e-4, 1e-2, 1e-1}) {
      GpModel m(ctx, GpHyper{0.5, s2, n2});
      const auto p = m.predict(cnp::TargetSet{{{0.2, -0.4}}});
      const double shrink = s2 / (s2 + n2 + kGpJitter);
      CHECK(p.means[0] == doctest::Approx(1.7 * shrink).epsilon(1e-12));
      const double var = s2 - s2 * shrink + n2 + kGpJitter;
      CHECK(p.stds[0] * p.stds[0] == doctest::Approx(var).epsilon(1e-10));
    }
  }
}

TEST_CASE("gp without noise interpolates") {
  Rng rng(6);
  const auto ctx = random_context(6, rng);
  GpModel m(ctx, GpHyper{0.7, 1.0, 0.0});
  cnp::TargetSet q;
  for (const auto& p : ctx.points) q.xs.push_back(p.x);
  const auto pred = m.predict(q);
  for (std::size_t i = 0; i < ctx.points.size(); ++i) CHECK(std::abs(pred.means[i] - ctx.points[i].y) < 1e-6);
}

TEST_CASE("gp matches a dense-inverse oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ctx = random_context(1 + rng.index(8), rng);
    const GpHyper h{rng.uniform(0.1, 3.0), rng.uniform(0.25, 4.0), rng.uniform(1e-4, 0.1)};
    GpModel m(ctx, h);
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (const auto& p : ctx.points) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    for (int k = 0; k < 5; ++k) {
      const std::vector<double> xq{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      const auto pred = m.predict(cnp::TargetSet{{xq}});
      const auto ref = oracle::gp_posterior(xs, ys, xq, h.lengthscale, h.signal_variance, h.noise_variance + kGpJitter);
      CHECK(std::abs(pred.means[0] - ref.mean) < 1e-8);
      CHECK(std::abs(pred.stds[0] * pred.stds[0] - ref.var) < 1e-8);
    }
  }
}

TEST_CASE("gp reverts to the prior far from the context") {
  Rng rng(8);
  const auto ctx = random_context(5, rng);
  const GpHyper h{0.3, 2.0, 1e-2};
  GpModel m(ctx, h);
  const auto p = m.predict(cnp::TargetSet{{{10.0, 10.0}}});
  CHECK(std::abs(p.means[0]) < 1e-6);
  CHECK(std::abs(p.stds[0] * p.stds[0] - (2.0 + 1e-2)) < 1e-6);
}

TEST_CASE("gp_fit picks the grid maximum of the marginal likelihood") {
  Rng rng(9);
  const auto ctx = random_context(7, rng);
  const auto grid = GpGrid::defaults();
  REQUIRE(grid.lengthscales.size() == 10);
  CHECK(grid.lengthscales.front() == doctest::Approx(0.1));
  CHECK(grid.lengthscales.back() == doctest::Approx(3.0));
  const auto best = gp_fit(ctx, grid);
  for (double l : grid.lengthscales)
    for (double s2 : grid.signal_variances)
      for (double n2 : grid.noise_variances) {
        CHECK(GpModel(ctx, GpHyper{l, s2, n2}).log_marginal_likelihood() <= best.log_marginal_likelihood());
      }
  CHECK_THROWS_AS(gp_fit(cnp::ContextSet{}, grid), ConfigError);
}

TEST_CASE("gp variance is never negative") {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ctx = random_context(8, rng);
    GpModel m(ctx, GpHyper{rng.uniform(0.1, 3.0), 1.0, 0.0});
    cnp::TargetSet q;
    for (const auto& p : ctx.points) q.xs.push_back(p.x);
    q.xs.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    for (double s : m.predict(q).stds) CHECK(s > 0.0);
  }
}

TEST_CASE("pooled prediction ignores the context") {
  data::SyntheticTaskConfig cfg;
  cfg.task_count = 30;
  cfg.seed = 11;
  const auto tasks = data::synth_tasks(cfg);
  const auto norm = data::compute_norm_stats(tasks);
  const auto pts = data::featurize_tasks(tasks, norm);
  PooledConfig pc;
  pc.hidden = {8, 8};
  pc.epochs = 2;
  const auto trained = pretrain_pooled(std::vector(pts.begin(), pts.begin() + 20), std::vector(pts.begin() + 20, pts.end()), pc);
  const eval::PooledPredictor pred(trained.model, norm);
  const auto queries = eval::queries_of(tasks[0].records);
  const auto a = pred.predict({}, queries);
  const auto b = pred.predict(tasks[1].records, queries);
  const auto c = pred.predict(std::span(tasks[0].records).subspan(0, 3), queries);
  CHECK(a.means == b.means);
  CHECK(a.stds == c.stds);
}

TEST_CASE("pooled training is deterministic and improves validation nll") {
  data::SyntheticTaskConfig cfg;
  cfg.task_count = 60;
  cfg.seed = 12;
  const auto tasks = data::synth_tasks(cfg);
  data::SplitSpec spec{0, 0.2, 1};
  const auto split = data::split_meta(tasks, spec);
  const auto norm = data::compute_norm_stats(split.meta_train);
  const auto train = data::featurize_tasks(split.meta_train, norm);
  const auto val = data::featurize_tasks(split.validation, norm);
  PooledConfig pc;
  pc.epochs = 10;
  pc.seed = 3;
  const auto a = pretrain_pooled(train, val, pc);
  const auto b = pretrain_pooled(train, val, pc);
  CHECK(a.model.net == b.model.net);
  CHECK(a.log == b.log);
  REQUIRE(a.log.best_epoch > 0);
  CHECK(a.log.epochs[a.log.best_epoch - 1].validation_nll < a.log.initial_validation_nll);
  nlohmann::json j = a.model;
  CHECK(j.get<PooledNn>().net == a.model.net);
}
