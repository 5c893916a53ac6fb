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

#include "cnpcreep/eval/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "cnpcreep/error.hpp"
#include "cnpcreep/random.hpp"

namespace cnpcreep::eval {

void EvalProtocol::validate() const {
  if (runs == 0) throw ConfigError("eval: runs must be at least 1");
  if (!context_size && !(context_fraction > 0.0 && context_fraction < 1.0)) {
    throw ConfigError("eval: context_fraction must lie in (0, 1)");
  }
  if (context_size && *context_size == 0) throw ConfigError("eval: context_size must be positive");
  if (!(interval_multiplier > 0.0)) throw ConfigError("eval: interval_multiplier must be positive");
}

std::size_t context_size_for(const data::TaskDataset& task, const EvalProtocol& protocol) {
  std::size_t m = 0;
  if (protocol.context_size) {
    m = *protocol.context_size;
  } else {
    // The small slack keeps exact products such as 15 * (1/3) from rounding up.
    const double raw = protocol.context_fraction * static_cast<double>(task.size());
    m = std::max(static_cast<std::size_t>(std::ceil(raw - 1e-9)), protocol.context_min);
  }
  if (m + 1 > task.size()) {
    throw ConfigError("eval: task " + task.cast_code + " has " + std::to_string(task.size()) +
                      " records, too few for a context of " + std::to_string(m) + " plus a target");
  }
  return m;
}

TaskSplit sample_task_split(const data::TaskDataset& task, std::size_t task_index, std::uint64_t run_seed,
                            const EvalProtocol& protocol) {
  const std::size_t m = context_size_for(task, protocol);
  Rng rng(derive_seed(run_seed, task_index));
  TaskSplit split;
  split.context = rng.sample_without_replacement(task.size(), m);
  std::sort(split.context.begin(), split.context.end());
  for (std::size_t i = 0, c = 0; i < task.size(); ++i) {
    if (c < split.context.size() && split.context[c] == i) {
      ++c;
    } else {
      split.targets.push_back(i);
    }
  }
  return split;
}

namespace {

void assert_disjoint(const TaskSplit& s, const std::string& cast_code) {
  for (auto t : s.targets) {
    if (std::binary_search(s.context.begin(), s.context.end(), t)) {
      throw std::logic_error("target leaked into context for task " + cast_code);
    }
  }
}

std::vector<data::CreepRecord> pick(const data::TaskDataset& task, const std::vector<std::size_t>& idx) {
  std::vector<data::CreepRecord> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(task.records[i]);
  return out;
}

struct Pooled {
  std::vector<double> y, means, stds;
};

}  // namespace

ExperimentReport run_experiment(const std::vector<const Predictor*>& models,
                                const std::vector<data::TaskDataset>& heldout, const EvalProtocol& protocol) {
  protocol.validate();
  if (heldout.empty()) throw ConfigError("eval: no held-out tasks");
  if (models.empty()) throw ConfigError("eval: no models requested");
  for (const auto& t : heldout) context_size_for(t, protocol);

  ExperimentReport report;
  report.protocol = protocol;
  for (const auto* m : models) report.models.push_back(ModelResult{m->name(), m->probabilistic(), {}, {}, 0});

  for (std::size_t run = 0; run < protocol.runs; ++run) {
    const std::uint64_t seed = protocol.base_seed + run;
    report.seeds.push_back(seed);
    std::vector<Pooled> pooled(models.size());
    std::size_t targets_total = 0;
    for (std::size_t ti = 0; ti < heldout.size(); ++ti) {
      const auto& task = heldout[ti];
      const auto split = sample_task_split(task, ti, seed, protocol);
      assert_disjoint(split, task.cast_code);
      const auto context = pick(task, split.context);
      const auto targets = pick(task, split.targets);
      const auto queries = queries_of(targets);
      targets_total += targets.size();
      for (std::size_t mi = 0; mi < models.size(); ++mi) {
        Prediction p;
        try {
          p = models[mi]->predict(context, queries);
        } catch (const FitError&) {
          ++report.models[mi].fit_failures;
          continue;
        }
        if (p.means.size() != targets.size() || (models[mi]->probabilistic() && p.stds.size() != targets.size())) {
          throw DimensionError("model " + models[mi]->name() + " returned the wrong number of predictions");
        }
        auto& acc = pooled[mi];
        for (std::size_t k = 0; k < targets.size(); ++k) {
          acc.y.push_back(std::log10(targets[k].rupture_h));
          acc.means.push_back(p.means[k]);
          if (models[mi]->probabilistic()) acc.stds.push_back(p.stds[k]);
        }
      }
    }
    report.targets_per_run.push_back(targets_total);
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      const auto& acc = pooled[mi];
      if (acc.y.size() < 2) continue;
      report.models[mi].runs.push_back(compute_metrics(acc.y, acc.means, acc.stds, protocol.interval_multiplier));
    }
  }
  for (auto& m : report.models) {
    if (!m.runs.empty()) m.aggregate = aggregate(m.runs);
  }
  return report;
}

namespace {

nlohmann::json summary_json(const std::optional<MetricSummary>& s) {
  if (!s) return nullptr;
  return nlohmann::json{{"mean", s->mean}, {"std", s->std ? nlohmann::json(*s->std) : nlohmann::json(nullptr)}};
}

}  // namespace

nlohmann::json report_json(const ExperimentReport& report) {
  nlohmann::json models = nlohmann::json::object();
  nlohmann::json order = nlohmann::json::array();
  for (const auto& m : report.models) {
    order.push_back(m.name);
    nlohmann::json entry;
    if (m.aggregate) {
      entry["e"] = summary_json(m.aggregate->e);
      entry["li"] = summary_json(m.aggregate->li);
      entry["p95"] = summary_json(m.aggregate->p95);
      entry["r2"] = summary_json(m.aggregate->r2);
    } else {
      entry["e"] = entry["li"] = entry["p95"] = entry["r2"] = nullptr;
    }
    entry["runs_scored"] = m.runs.size();
    entry["fit_failures"] = m.fit_failures;
    models[m.name] = std::move(entry);
  }
  return nlohmann::json{{"models", std::move(models)},
                        {"model_order", std::move(order)},
                        {"protocol", report.protocol},
                        {"seeds", report.seeds},
                        {"targets_per_run", report.targets_per_run}};
}

std::string report_table(const nlohmann::json& report) {
  const auto& models = report.at("models");
  std::vector<std::string> names;
  if (report.contains("model_order")) {
    names = report.at("model_order").get<std::vector<std::string>>();
  } else {
    for (const auto& [k, v] : models.items()) names.push_back(k);
  }
  const std::vector<std::pair<std::string, std::string>> rows{{"e", "e"}, {"li", "li"}, {"p95", "P_95"}, {"r2", "R^2"}};

  auto cell = [](const nlohmann::json& s) -> std::string {
    if (s.is_null()) return "-";
    char buf[64];
    const double mean = s.at("mean").get<double>();
    if (s.at("std").is_null()) {
      std::snprintf(buf, sizeof buf, "%.3f", mean);
    } else {
      std::snprintf(buf, sizeof buf, "%.3f ± %.3f", mean, s.at("std").get<double>());
    }
    return buf;
  };
  // Display width, counting the two-byte plus-minus sign as one column.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };

  std::vector<std::vector<std::string>> grid;
  grid.push_back({""});
  for (const auto& n : names) grid.back().push_back(n);
  for (const auto& [key, label] : rows) {
    grid.push_back({label});
    for (const auto& n : names) grid.back().push_back(cell(models.at(n).at(key)));
  }
  std::vector<std::size_t> widths(names.size() + 1, 0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], width(row[c]));
  }
  std::ostringstream os;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) os << "  ";
      os << row[c];
      if (c + 1 < row.size()) os << std::string(widths[c] - width(row[c]), ' ');
    }
    os << '\n';
  }
  const auto runs = report.at("seeds").size();
  os << "runs: " << runs << '\n';
  return os.str();
}

void to_json(nlohmann::json& j, const EvalProtocol& p) {
  j = nlohmann::json{{"context_fraction", p.context_fraction},
                     {"context_min", p.context_min},
                     {"context_size", p.context_size ? nlohmann::json(*p.context_size) : nlohmann::json(nullptr)},
                     {"runs", p.runs},
                     {"base_seed", p.base_seed},
                     {"interval_multiplier", p.interval_multiplier}};
}

void from_json(const nlohmann::json& j, EvalProtocol& p) {
  EvalProtocol d;
  p.context_fraction = j.value("context_fraction", d.context_fraction);
  p.context_min = j.value("context_min", d.context_min);
  if (j.contains("context_size") && !j.at("context_size").is_null()) {
    p.context_size = j.at("context_size").get<std::size_t>();
  } else {
    p.context_size.reset();
  }
  p.runs = j.value("runs", d.runs);
  p.base_seed = j.value("base_seed", d.base_seed);
  p.interval_multiplier = j.value("interval_multiplier", d.interval_multiplier);
}

}  // namespace cnpcreep::eval
