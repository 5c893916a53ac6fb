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

#include "cnpcreep/eval/predictors.hpp"

namespace cnpcreep::eval {

std::vector<QueryPoint> queries_of(std::span<const data::CreepRecord> records) {
  std::vector<QueryPoint> q;
  q.reserve(records.size());
  for (const auto& r : records) q.push_back(QueryPoint{r.stress_mpa, r.temp_c});
  return q;
}

namespace {

cnp::ContextSet context_of(std::span<const data::CreepRecord> records, const data::NormStats& norm) {
  cnp::ContextSet c;
  c.points.reserve(records.size());
  for (const auto& r : records) c.points.push_back(data::featurize(r, norm));
  return c;
}

cnp::TargetSet targets_of(std::span<const QueryPoint> queries, const data::NormStats& norm) {
  cnp::TargetSet t;
  t.xs.reserve(queries.size());
  for (const auto& q : queries) t.xs.push_back(data::featurize_x(q.stress_mpa, q.temp_c, norm));
  return t;
}

Prediction to_hours(const cnp::GaussianPrediction& pred, const data::NormStats& norm) {
  auto p = data::unnormalize(pred, norm);
  return Prediction{std::move(p.means), std::move(p.stds)};
}

}  // namespace

Prediction CnpPredictor::predict(std::span<const data::CreepRecord> context,
                                 std::span<const QueryPoint> queries) const {
  return to_hours(cnp::predict(model_, context_of(context, norm_), targets_of(queries, norm_)), norm_);
}

Prediction PooledPredictor::predict(std::span<const data::CreepRecord>, std::span<const QueryPoint> queries) const {
  return to_hours(baselines::pooled_predict(model_, targets_of(queries, norm_)), norm_);
}

Prediction LmPredictor::predict(std::span<const data::CreepRecord> context,
                                std::span<const QueryPoint> queries) const {
  std::vector<baselines::LmObservation> obs;
  obs.reserve(context.size());
  for (const auto& r : context) obs.push_back({r.stress_mpa, r.temp_c, r.rupture_h});
  const auto model = baselines::lm_fit(obs, degree_, c_lm_);
  Prediction p;
  p.means.reserve(queries.size());
  for (const auto& q : queries) p.means.push_back(baselines::lm_predict_log10(model, q.stress_mpa, q.temp_c));
  return p;
}

Prediction GpPredictor::predict(std::span<const data::CreepRecord> context,
                                std::span<const QueryPoint> queries) const {
  const auto model = baselines::gp_fit(context_of(context, norm_), grid_);
  return to_hours(model.predict(targets_of(queries, norm_)), norm_);
}

}  // namespace cnpcreep::eval
