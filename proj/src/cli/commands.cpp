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

#include "cnpcreep/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "cnpcreep/data/synthetic.hpp"
#include "cnpcreep/eval/experiment.hpp"
#include "cnpcreep/eval/plot_export.hpp"

namespace cnpcreep::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
      return 2;
    case ErrorKind::data:
      return 3;
    case ErrorKind::numeric:
      return 4;
  }
  return 1;
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("output directory " + dir.string() + " is not writable");
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

json read_json(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot read ") + what + " " + path.string());
  auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(std::string(what) + " " + path.string() + " is not valid JSON");
  return doc;
}

std::string safe_file_name(const std::string& s) {
  std::string out = s;
  for (auto& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

fs::path checkpoint_path(const RunConfig& config, const fs::path& given) {
  return given.empty() ? config.out / kCnpCheckpoint : given;
}

// Reads a headed numeric CSV, returning the requested columns per row.
std::vector<std::vector<double>> read_numeric_columns(const fs::path& path, const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = data::split_csv_line(line);
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    const auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) {
      throw DimensionError(path.string() + ": missing column '" + c + "' (model expects 2 features)");
    }
    idx.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = data::split_csv_line(line);
    std::vector<double> row;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= f.size()) throw DataError(path.string() + ":" + std::to_string(line_no) + ": too few fields");
      try {
        std::size_t used = 0;
        const double v = std::stod(f[idx[k]], &used);
        if (used != f[idx[k]].size() || !std::isfinite(v)) throw std::invalid_argument("bad");
        row.push_back(v);
      } catch (const std::exception&) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": column '" + columns[k] +
                        "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> codes_of(const std::vector<data::TaskDataset>& tasks) {
  std::vector<std::string> codes;
  for (const auto& t : tasks) codes.push_back(t.cast_code);
  return codes;
}

void check_manifest(const fs::path& manifest_path, const data::MetaSplit& split) {
  if (!fs::exists(manifest_path)) return;
  const auto doc = read_json(manifest_path, "split manifest");
  std::vector<std::string> saved;
  try {
    saved = doc.at("heldout_test").at("cast_codes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError("split manifest " + manifest_path.string() + ": " + e.what());
  }
  if (saved != codes_of(split.heldout_test)) {
    throw ConfigError("held-out tasks differ from " + manifest_path.string() +
                      "; evaluate with the data and split used for training");
  }
}

void write_plots(const RunConfig& config, const std::vector<const eval::Predictor*>& models,
                 const std::vector<data::TaskDataset>& heldout, std::ostream& log) {
  const fs::path root = config.out / "plots";
  for (const auto* m : models) ensure_dir(root / safe_file_name(m->name()));
  for (std::size_t ti = 0; ti < heldout.size(); ++ti) {
    const auto& task = heldout[ti];
    const auto split = eval::sample_task_split(task, ti, config.eval.base_seed, config.eval);
    std::vector<data::CreepRecord> context, targets;
    for (auto i : split.context) context.push_back(task.records[i]);
    for (auto i : split.targets) targets.push_back(task.records[i]);
    std::set<double> temps;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : task.records) {
      temps.insert(r.temp_c);
      lo = std::min(lo, std::log10(r.stress_mpa));
      hi = std::max(hi, std::log10(r.stress_mpa));
    }
    const std::vector<double> temp_list(temps.begin(), temps.end());
    const auto grid =
        eval::linspace(lo - config.plot.log10_stress_margin, hi + config.plot.log10_stress_margin, config.plot.grid_points);
    for (const auto* m : models) {
      std::vector<eval::PlotRow> rows;
      try {
        rows = eval::export_plot_data(*m, context, targets, temp_list, grid, config.plot.band_multiplier);
      } catch (const FitError& e) {
        log << "plot: " << m->name() << " skipped for " << task.cast_code << ": " << e.what() << '\n';
        continue;
      }
      auto out = open_out(root / safe_file_name(m->name()) / (safe_file_name(task.cast_code) + ".csv"));
      eval::write_plot_csv(out, rows);
    }
  }
}

}  // namespace

void write_json(const fs::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw ConfigError("failed writing " + path.string());
}

PreparedData prepare_data(const RunConfig& config, std::ostream& log) {
  PreparedData p;
  if (config.csv) {
    auto loaded = data::load_csv(*config.csv, config.schema, config.strict);
    p.rejected_rows = loaded.rejected.size();
    for (const auto& e : loaded.rejected) {
      log << config.csv->string() << ":" << e.line << ": rejected: " << e.message << '\n';
    }
    if (loaded.records.empty()) throw DataError(config.csv->string() + ": no valid records");
    p.tasks = data::build_tasks(loaded.records);
  } else {
    p.tasks = data::synth_tasks(*config.synthetic);
  }
  p.split = data::split_meta(p.tasks, config.split);
  p.norm = data::compute_norm_stats(p.split.meta_train);
  log << "tasks: " << p.tasks.size() << " (train " << p.split.meta_train.size() << ", validation "
      << p.split.validation.size() << ", held-out " << p.split.heldout_test.size() << ")\n";
  return p;
}

json checkpoint_json(const CnpCheckpoint& ckpt, const cnp::EpisodeConfig& episodes) {
  return json{{"config", ckpt.model.config}, {"encoder", ckpt.model.encoder}, {"decoder", ckpt.model.decoder},
              {"norm_stats", ckpt.norm},     {"seed", ckpt.seed},             {"train_log", ckpt.log},
              {"episodes", episodes}};
}

CnpCheckpoint load_checkpoint(const fs::path& path) {
  const auto doc = read_json(path, "checkpoint");
  CnpCheckpoint c;
  try {
    c.model.config = doc.at("config").get<cnp::CnpConfig>();
    c.model.encoder = doc.at("encoder").get<nn::MlpParams>();
    c.model.decoder = doc.at("decoder").get<nn::MlpParams>();
    c.norm = doc.at("norm_stats").get<data::NormStats>();
    c.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("train_log")) c.log = doc.at("train_log").get<cnp::TrainLog>();
  } catch (const json::exception& e) {
    throw ConfigError("checkpoint " + path.string() + ": " + e.what());
  }
  if (c.model.config.x_dim != data::kFeatureDim) {
    throw DimensionError("checkpoint " + path.string() + " expects x_dim " + std::to_string(c.model.config.x_dim) +
                         " but the data has " + std::to_string(data::kFeatureDim) + " features");
  }
  c.model.validate();
  return c;
}

PooledCheckpoint load_pooled_checkpoint(const fs::path& path) {
  const auto doc = read_json(path, "pooled checkpoint");
  PooledCheckpoint c;
  try {
    c.model = doc.at("model").get<baselines::PooledNn>();
    c.norm = doc.at("norm_stats").get<data::NormStats>();
    c.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("train_log")) c.log = doc.at("train_log").get<cnp::TrainLog>();
  } catch (const json::exception& e) {
    throw ConfigError("pooled checkpoint " + path.string() + ": " + e.what());
  }
  if (c.model.x_dim() != data::kFeatureDim) {
    throw DimensionError("pooled checkpoint " + path.string() + " expects x_dim " + std::to_string(c.model.x_dim()));
  }
  return c;
}

void cmd_synth_gen(const RunConfig& config, std::ostream& log) {
  if (!config.synthetic) throw ConfigError("synth-gen needs data.synthetic in the config");
  ensure_dir(config.out);
  const auto family = data::synth_family(*config.synthetic);
  auto out = open_out(config.out / kSyntheticCsv);
  data::write_csv(out, data::flatten_tasks(family.tasks));
  out.close();
  write_json(config.out / kSyntheticManifest, data::synthetic_manifest(*config.synthetic, family));
  log << "synth-gen: " << family.tasks.size() << " tasks written to " << (config.out / kSyntheticCsv).string()
      << '\n';
}

void cmd_train(const RunConfig& config, std::ostream& log) {
  ensure_dir(config.out);
  const auto prepared = prepare_data(config, log);
  const auto train = data::featurize_tasks(prepared.split.meta_train, prepared.norm);
  const auto validation = data::featurize_tasks(prepared.split.validation, prepared.norm);

  log << "train: cnp, " << config.episodes.epochs << " epochs of " << config.episodes.episodes_per_epoch
      << " episodes\n";
  const auto cnp_result = cnp::meta_train(train, validation, config.episodes, config.cnp);
  log << "train: cnp best epoch " << cnp_result.log.best_epoch << " of " << cnp_result.log.epochs.size()
      << (cnp_result.log.stopped_early ? " (early stop)" : "") << '\n';

  log << "train: pooled, " << config.pooled.epochs << " epochs\n";
  const auto pooled_result = baselines::pretrain_pooled(train, validation, config.pooled);
  log << "train: pooled best epoch " << pooled_result.log.best_epoch << " of " << pooled_result.log.epochs.size()
      << '\n';

  CnpCheckpoint ckpt{cnp_result.model, prepared.norm, config.seed, cnp_result.log};
  write_json(config.out / kCnpCheckpoint, checkpoint_json(ckpt, config.episodes));
  write_json(config.out / kPooledCheckpoint, json{{"model", pooled_result.model},
                                                  {"config", config.pooled},
                                                  {"norm_stats", prepared.norm},
                                                  {"seed", config.seed},
                                                  {"train_log", pooled_result.log}});
  write_json(config.out / kSplitManifest, data::split_manifest(prepared.split, config.split));
  write_json(config.out / kTrainLog, json{{"cnp", cnp_result.log}, {"pooled", pooled_result.log}});
}

std::string cmd_eval(const RunConfig& config, const fs::path& checkpoint, std::ostream& log, const EvalHooks& hooks) {
  const fs::path ckpt_path = checkpoint_path(config, checkpoint);
  const bool needs_cnp = std::find(config.models.begin(), config.models.end(), "cnp") != config.models.end();
  ensure_dir(config.out);

  std::optional<CnpCheckpoint> ckpt;
  if (needs_cnp || fs::exists(ckpt_path)) ckpt = load_checkpoint(ckpt_path);

  const auto prepared = prepare_data(config, log);
  check_manifest(ckpt_path.parent_path() / kSplitManifest, prepared.split);
  // Models fitted per task share the training normalization when available.
  const data::NormStats norm = ckpt ? ckpt->norm : prepared.norm;

  std::vector<std::unique_ptr<eval::Predictor>> owned;
  for (const auto& name : config.models) {
    if (name == "cnp") {
      owned.push_back(std::make_unique<eval::CnpPredictor>(ckpt->model, ckpt->norm));
    } else if (name == "pooled") {
      const auto pooled = load_pooled_checkpoint(ckpt_path.parent_path() / kPooledCheckpoint);
      owned.push_back(std::make_unique<eval::PooledPredictor>(pooled.model, pooled.norm));
    } else if (name == "gp") {
      owned.push_back(std::make_unique<eval::GpPredictor>(config.gp_grid, norm));
    } else {
      owned.push_back(std::make_unique<eval::LmPredictor>(std::stoi(name.substr(2)), config.c_lm));
    }
  }
  std::vector<const eval::Predictor*> models;
  for (const auto& m : owned) models.push_back(m.get());
  for (const auto& m : hooks.extra_models) models.push_back(m.get());

  log << "eval: " << prepared.split.heldout_test.size() << " held-out tasks, " << config.eval.runs << " runs\n";
  const auto report = eval::run_experiment(models, prepared.split.heldout_test, config.eval);
  for (const auto& m : report.models) {
    if (m.fit_failures > 0) log << "eval: " << m.name << " failed to fit on " << m.fit_failures << " task runs\n";
  }
  const auto doc = eval::report_json(report);
  write_json(config.out / kReportJson, doc);
  const auto table = eval::report_table(doc);
  auto text = open_out(config.out / kReportText);
  text << table;
  text.close();

  if (config.plot.enabled) write_plots(config, models, prepared.split.heldout_test, log);
  return table;
}

void cmd_predict(const RunConfig& config, const fs::path& checkpoint, const fs::path& context_csv,
                 const fs::path& query_csv, std::ostream& log) {
  const auto ckpt = load_checkpoint(checkpoint_path(config, checkpoint));
  ensure_dir(config.out);
  const auto ctx_rows = read_numeric_columns(context_csv, {"stress_mpa", "temp_c", "time_h"});
  const auto query_rows = read_numeric_columns(query_csv, {"stress_mpa", "temp_c"});

  std::vector<data::CreepRecord> context;
  for (const auto& r : ctx_rows) {
    data::CreepRecord rec{"context", "", r[0], r[1], r[2]};
    const auto problem = data::validate_record(rec);
    if (!problem.empty()) throw DataError(context_csv.string() + ": " + problem);
    context.push_back(rec);
  }
  std::vector<eval::QueryPoint> queries;
  for (const auto& r : query_rows) {
    if (!(r[0] > 0.0)) throw DataError(query_csv.string() + ": nonpositive stress");
    queries.push_back(eval::QueryPoint{r[0], r[1]});
  }

  const eval::CnpPredictor model(ckpt.model, ckpt.norm);
  const auto pred = model.predict(context, queries);
  std::ostringstream os;
  os << std::setprecision(17) << "stress_mpa,temp_c,log10_stress,mu,sigma,lo2s,hi2s\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double mu = pred.means[i], s = pred.stds[i];
    os << queries[i].stress_mpa << ',' << queries[i].temp_c << ',' << std::log10(queries[i].stress_mpa) << ',' << mu
       << ',' << s << ',' << mu - 2.0 * s << ',' << mu + 2.0 * s << '\n';
  }
  auto out = open_out(config.out / kPredictions);
  out << os.str();
  log << "predict: " << queries.size() << " queries from " << context.size() << " context points\n";
}

std::string cmd_report(const fs::path& report_json) {
  return eval::report_table(read_json(report_json, "report"));
}

}  // namespace cnpcreep::cli
