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

#include "cnpcreep/data/features.hpp"

#include <bit>
#include <cmath>

#include "cnpcreep/error.hpp"

namespace cnpcreep::data {

std::uint64_t NormStats::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (double v : {temp_mean, temp_std, y_mean, y_std}) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

NormStats compute_norm_stats(const std::vector<TaskDataset>& tasks) {
  double n = 0.0, t_sum = 0.0, y_sum = 0.0;
  for (const auto& task : tasks) {
    for (const auto& r : task.records) {
      n += 1.0;
      t_sum += r.temp_c;
      y_sum += std::log10(r.rupture_h);
    }
  }
  if (n == 0.0) throw DataError("cannot compute normalization statistics from zero records");
  NormStats s;
  s.temp_mean = t_sum / n;
  s.y_mean = y_sum / n;
  double t_ss = 0.0, y_ss = 0.0;
  for (const auto& task : tasks) {
    for (const auto& r : task.records) {
      const double dt = r.temp_c - s.temp_mean;
      const double dy = std::log10(r.rupture_h) - s.y_mean;
      t_ss += dt * dt;
      y_ss += dy * dy;
    }
  }
  s.temp_std = std::sqrt(t_ss / n);
  s.y_std = std::sqrt(y_ss / n);
  if (!(s.temp_std > 0.0)) s.temp_std = 1.0;
  if (!(s.y_std > 0.0)) s.y_std = 1.0;
  return s;
}

std::vector<double> featurize_x(double stress_mpa, double temp_c, const NormStats& norm) {
  if (!(stress_mpa > 0.0)) throw DomainError("featurize: stress must be positive");
  return {std::log10(stress_mpa), (temp_c - norm.temp_mean) / norm.temp_std};
}

cnp::LabeledPoint featurize(const CreepRecord& r, const NormStats& norm) {
  if (!(r.rupture_h > 0.0)) throw DomainError("featurize: rupture time must be positive");
  return cnp::LabeledPoint{featurize_x(r.stress_mpa, r.temp_c, norm),
                           (std::log10(r.rupture_h) - norm.y_mean) / norm.y_std};
}

cnp::PointTask featurize_task(const TaskDataset& task, const NormStats& norm) {
  cnp::PointTask out{task.cast_code, {}};
  out.points.reserve(task.size());
  for (const auto& r : task.records) out.points.push_back(featurize(r, norm));
  return out;
}

std::vector<cnp::PointTask> featurize_tasks(const std::vector<TaskDataset>& tasks, const NormStats& norm) {
  std::vector<cnp::PointTask> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back(featurize_task(t, norm));
  return out;
}

double unnormalize_y(double y, const NormStats& norm) { return y * norm.y_std + norm.y_mean; }

cnp::GaussianPrediction unnormalize(const cnp::GaussianPrediction& pred, const NormStats& norm) {
  cnp::GaussianPrediction out = pred;
  for (double& m : out.means) m = unnormalize_y(m, norm);
  for (double& s : out.stds) s *= norm.y_std;
  return out;
}

void to_json(nlohmann::json& j, const NormStats& n) {
  j = nlohmann::json{
      {"temp_mean", n.temp_mean}, {"temp_std", n.temp_std}, {"y_mean", n.y_mean}, {"y_std", n.y_std}};
}

void from_json(const nlohmann::json& j, NormStats& n) {
  n.temp_mean = j.at("temp_mean").get<double>();
  n.temp_std = j.at("temp_std").get<double>();
  n.y_mean = j.at("y_mean").get<double>();
  n.y_std = j.at("y_std").get<double>();
  if (!(n.temp_std > 0.0) || !(n.y_std > 0.0)) throw ConfigError("norm_stats: standard deviations must be positive");
}

}  // namespace cnpcreep::data
