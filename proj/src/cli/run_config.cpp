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

#include "cnpcreep/cli/run_config.hpp"

#include <fstream>
#include <set>

#include "cnpcreep/error.hpp"

namespace cnpcreep::cli {

void RunConfig::apply_seed() {
  split.seed = seed;
  episodes.seed = seed + 1;
  pooled.seed = seed + 2;
  eval.base_seed = seed + 1000;
}

bool is_known_model(const std::string& name) {
  if (name == "cnp" || name == "pooled" || name == "gp") return true;
  if (name.size() > 2 && name.compare(0, 2, "lm") == 0) {
    for (std::size_t i = 2; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') return false;
    }
    return std::stoi(name.substr(2)) >= 1;
  }
  return false;
}

void RunConfig::validate() const {
  if (csv.has_value() == synthetic.has_value()) {
    throw ConfigError("config: exactly one data source (data.csv or data.synthetic) is required");
  }
  if (synthetic) synthetic->validate();
  cnp.validate();
  episodes.validate();
  pooled.validate();
  eval.validate();
  if (cnp.x_dim != 2) throw ConfigError("config: cnp.x_dim must be 2 (log10 stress, temperature)");
  if (models.empty()) throw ConfigError("config: no models requested");
  std::set<std::string> seen;
  for (const auto& m : models) {
    if (!is_known_model(m)) throw ConfigError("config: unknown model '" + m + "'");
    if (!seen.insert(m).second) throw ConfigError("config: model '" + m + "' listed twice");
  }
  if (plot.grid_points == 0) throw ConfigError("config: plot.grid_points must be positive");
  if (out.empty()) throw ConfigError("config: output directory is empty");
}

void apply_override(nlohmann::json& doc, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) throw ConfigError("override: empty key");
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override: malformed key '" + dotted_key + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override: '" + dotted_key + "' descends into a non-object");
      *node = nlohmann::json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  auto parsed = nlohmann::json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? nlohmann::json(value) : parsed;
}

nlohmann::json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("config " + path.string() + " is not a JSON object");
  return doc;
}

RunConfig parse_run_config(const nlohmann::json& doc) {
  static const std::set<std::string> known{"data", "split", "cnp", "episodes", "pooled", "baselines",
                                           "eval", "models", "plot", "out", "seed", "strict"};
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  }
  RunConfig c;
  try {
    const auto empty = nlohmann::json::object();
    const auto& data = doc.contains("data") ? doc.at("data") : empty;
    if (data.contains("csv")) c.csv = data.at("csv").get<std::string>();
    if (data.contains("columns")) c.schema = data.at("columns").get<data::CsvSchema>();
    if (data.contains("synthetic")) c.synthetic = data.at("synthetic").get<data::SyntheticTaskConfig>();
    if (doc.contains("split")) c.split = doc.at("split").get<data::SplitSpec>();
    if (doc.contains("cnp")) c.cnp = doc.at("cnp").get<cnp::CnpConfig>();
    if (doc.contains("episodes")) c.episodes = doc.at("episodes").get<cnp::EpisodeConfig>();
    if (doc.contains("pooled")) c.pooled = doc.at("pooled").get<baselines::PooledConfig>();
    if (doc.contains("baselines")) {
      const auto& b = doc.at("baselines");
      c.c_lm = b.value("c_lm", c.c_lm);
      if (b.contains("gp")) c.gp_grid = b.at("gp").get<baselines::GpGrid>();
    }
    if (doc.contains("eval")) c.eval = doc.at("eval").get<eval::EvalProtocol>();
    if (doc.contains("models")) c.models = doc.at("models").get<std::vector<std::string>>();
    if (doc.contains("plot")) {
      const auto& p = doc.at("plot");
      c.plot.enabled = p.value("enabled", c.plot.enabled);
      c.plot.grid_points = p.value("grid_points", c.plot.grid_points);
      c.plot.log10_stress_margin = p.value("log10_stress_margin", c.plot.log10_stress_margin);
      c.plot.band_multiplier = p.value("band_multiplier", c.plot.band_multiplier);
    }
    c.out = doc.value("out", std::string("out"));
    c.seed = doc.value("seed", std::uint64_t{0});
    c.strict = doc.value("strict", false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.apply_seed();
  c.validate();
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json data = nlohmann::json::object();
  if (c.csv) data["csv"] = c.csv->string();
  data["columns"] = c.schema;
  if (c.synthetic) data["synthetic"] = *c.synthetic;
  return nlohmann::json{{"data", std::move(data)},
                        {"split", c.split},
                        {"cnp", c.cnp},
                        {"episodes", c.episodes},
                        {"pooled", c.pooled},
                        {"baselines", {{"c_lm", c.c_lm}, {"gp", c.gp_grid}}},
                        {"eval", c.eval},
                        {"models", c.models},
                        {"plot",
                         {{"enabled", c.plot.enabled},
                          {"grid_points", c.plot.grid_points},
                          {"log10_stress_margin", c.plot.log10_stress_margin},
                          {"band_multiplier", c.plot.band_multiplier}}},
                        {"out", c.out.string()},
                        {"seed", c.seed},
                        {"strict", c.strict}};
}

}  // namespace cnpcreep::cli
