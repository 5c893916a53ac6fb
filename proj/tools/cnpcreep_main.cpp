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

// cnpcreep: synth-gen | train | eval | predict | report.
//
// Configuration comes from --config (JSON) with dotted overrides, either as
// --set key=value or directly as --key.path=value. Exit codes: 0 success,
// 2 configuration or dimension error, 3 data error, 4 numeric failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnpcreep/cli/commands.hpp"
#include "cnpcreep/cli/run_config.hpp"
#include "cnpcreep/error.hpp"

namespace {

using cnpcreep::cli::RunConfig;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool strict = false;
  std::vector<std::string> sets;
};

void apply_key_value(nlohmann::json& doc, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw cnpcreep::ConfigError("override '" + kv + "' is not key=value");
  cnpcreep::cli::apply_override(doc, kv.substr(0, eq), kv.substr(eq + 1));
}

RunConfig build_config(const GlobalOptions& g, const std::vector<std::string>& extras) {
  nlohmann::json doc = g.config.empty() ? nlohmann::json::object() : cnpcreep::cli::load_config_json(g.config);
  for (const auto& kv : g.sets) apply_key_value(doc, kv);
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& a = extras[i];
    if (a.rfind("--", 0) != 0) throw cnpcreep::ConfigError("unexpected argument '" + a + "'");
    std::string kv = a.substr(2);
    if (kv.find('=') == std::string::npos) {
      if (i + 1 >= extras.size()) throw cnpcreep::ConfigError("override '" + a + "' needs a value");
      kv += "=" + extras[++i];
    }
    apply_key_value(doc, kv);
  }
  if (g.seed) doc["seed"] = *g.seed;
  if (!g.out.empty()) doc["out"] = g.out;
  if (g.strict) doc["strict"] = true;
  return cnpcreep::cli::parse_run_config(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional neural processes for creep-rupture life prediction"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::string checkpoint, context_csv, query_csv, report_path;

  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--config", g.config, "JSON run configuration");
    sub->add_option("--seed", g.seed, "global seed");
    sub->add_option("--out", g.out, "output directory");
    sub->add_flag("--strict", g.strict, "fail on the first invalid CSV row");
    sub->add_option("--set", g.sets, "dotted override key=value (repeatable)");
    sub->allow_extras();
  };

  auto* synth = app.add_subcommand("synth-gen", "write a synthetic task family as CSV");
  add_globals(synth);
  auto* train = app.add_subcommand("train", "meta-train the CNP and the pooled baseline");
  add_globals(train);
  auto* evaluate = app.add_subcommand("eval", "compare models on the held-out tasks");
  add_globals(evaluate);
  evaluate->add_option("--checkpoint", checkpoint, "CNP checkpoint (default <out>/cnp_checkpoint.json)");
  auto* predict = app.add_subcommand("predict", "predict rupture life for a new task");
  add_globals(predict);
  predict->add_option("--checkpoint", checkpoint, "CNP checkpoint (default <out>/cnp_checkpoint.json)");
  predict->add_option("--context", context_csv, "context CSV: stress_mpa,temp_c,time_h")->required();
  predict->add_option("--query", query_csv, "query CSV: stress_mpa,temp_c")->required();
  auto* report = app.add_subcommand("report", "render a saved report.json as a table");
  report->add_option("--report", report_path, "report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (report->parsed()) {
      std::cout << cnpcreep::cli::cmd_report(report_path);
      return 0;
    }
    CLI::App* active = app.get_subcommands().front();
    const auto config = build_config(g, active->remaining());
    if (synth->parsed()) {
      cnpcreep::cli::cmd_synth_gen(config, std::cerr);
    } else if (train->parsed()) {
      cnpcreep::cli::cmd_train(config, std::cerr);
    } else if (evaluate->parsed()) {
      std::cout << cnpcreep::cli::cmd_eval(config, checkpoint, std::cerr);
    } else if (predict->parsed()) {
      cnpcreep::cli::cmd_predict(config, checkpoint, context_csv, query_csv, std::cerr);
    }
  } catch (const cnpcreep::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cnpcreep::cli::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
