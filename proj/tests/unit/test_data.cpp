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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "cnpcreep/baselines/larson_miller.hpp"
#include "cnpcreep/data/features.hpp"
#include "cnpcreep/data/records.hpp"
#include "cnpcreep/data/split.hpp"
#include "cnpcreep/data/synthetic.hpp"
#include "cnpcreep/error.hpp"
#include "cnpcreep/random.hpp"

using namespace cnpcreep;
using namespace cnpcreep::data;

namespace {

const std::string kFixtures = CNPCREEP_FIXTURES;

std::vector<TaskDataset> sized_tasks(const std::vector<std::pair<std::string, std::size_t>>& spec) {
  std::vector<TaskDataset> tasks;
  for (const auto& [code, n] : spec) {
    TaskDataset t{code, {}};
    for (std::size_t i = 0; i < n; ++i) {
      t.records.push_back({code, "m", 100.0 + static_cast<double>(i), 500.0, 10.0});
    }
    tasks.push_back(t);
  }
  return tasks;
}

std::set<std::string> codes(const std::vector<TaskDataset>& tasks) {
  std::set<std::string> s;
  for (const auto& t : tasks) s.insert(t.cast_code);
  return s;
}

}  // namespace

TEST_CASE("the ten-row fixture loads field for field") {
  const auto res = load_csv(std::filesystem::path(kFixtures + "/ten_rows.csv"));
  CHECK(res.rejected.empty());
  const std::vector<CreepRecord> expected{
      {"MAA", "1Cr-0.5Mo, plate", 240, 450, 1234.5}, {"MAA", "1Cr-0.5Mo, plate", 180, 500, 8120},
      {"MAA", "1Cr-0.5Mo, plate", 120, 550, 15001.25}, {"MAB", "2.25Cr-1Mo", 300, 450, 310.7},
      {"MAB", "2.25Cr-1Mo", 200, 500, 2950},         {"MAB", "2.25Cr-1Mo", 95, 600, 40210},
      {"MAB", "2.25Cr-1Mo", 60, 650, 11800.5},       {"MBA", "9Cr-1Mo", 400, 500, 88.25},
      {"MBA", "9Cr-1Mo", 250, 550, 1900},            {"MBA", "9Cr-1Mo", 140, 600, 23000},
  };
  CHECK(res.records == expected);
  const auto tasks = build_tasks(res.records);
  REQUIRE(tasks.size() == 3);
  CHECK(tasks[0].size() == 3);
  CHECK(tasks[1].size() == 4);
  CHECK(tasks[2].cast_code == "MBA");
}

TEST_CASE("invalid rows are rejected with their line numbers") {
  const auto res = load_csv(std::filesystem::path(kFixtures + "/bad_rows.csv"));
  CHECK(res.records.size() == 1);
  REQUIRE(res.rejected.size() == 3);
  CHECK(res.rejected[0].line == 3);
  CHECK(res.rejected[0].message == "nonpositive stress");
  CHECK(res.rejected[1].line == 4);
  CHECK(res.rejected[2].line == 5);
  CHECK(res.rejected[2].message == "nonpositive rupture time");
  CHECK_THROWS_AS(load_csv(std::filesystem::path(kFixtures + "/bad_rows.csv"), {}, true), DataError);
}

TEST_CASE("header-only input is an empty load") {
  std::istringstream in("cast_code,material,stress_mpa,temp_c,time_h\n");
  const auto res = load_csv(in);
  CHECK(res.records.empty());
  CHECK(res.rejected.empty());
}

TEST_CASE("a missing column is a data error naming it") {
  std::istringstream in("cast_code,material,stress_mpa,time_h\nA,m,1,2\n");
  try {
    load_csv(in);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("temp_c") != std::string::npos);
  }
}

TEST_CASE("schema aliases map other header names") {
  std::istringstream in("Cast,Steel,Stress (MPa),Temp (C),Life (h)\nX1,s,150,550,999\n");
  CsvSchema schema;
  schema.aliases["cast_code"] = {"Cast"};
  schema.aliases["material"] = {"Steel"};
  schema.aliases["stress"] = {"Stress (MPa)"};
  schema.aliases["temperature"] = {"Temp (C)"};
  schema.aliases["rupture_time"] = {"hours", "Life (h)"};
  const auto res = load_csv(in, schema);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0] == CreepRecord{"X1", "s", 150, 550, 999});
}

TEST_CASE("write_csv and load_csv round trip exactly") {
  Rng rng(1);
  std::vector<CreepRecord> recs;
  for (int i = 0; i < 50; ++i) {
    recs.push_back({"C" + std::to_string(i % 7), "mat, \"q\"", rng.uniform(10, 500), rng.uniform(400, 700),
                    std::pow(10.0, rng.uniform(0, 5))});
  }
  std::stringstream buf;
  write_csv(buf, recs);
  const auto back = load_csv(buf);
  CHECK(back.rejected.empty());
  CHECK(back.records == recs);
}

TEST_CASE("grouping matches a brute-force oracle") {
  CHECK(build_tasks({}).empty());
  Rng rng(2);
  std::vector<CreepRecord> recs;
  for (int i = 0; i < 500; ++i) {
    recs.push_back({"K" + std::to_string(rng.index(40)), "m", std::round(rng.uniform(50, 500)),
                    450.0 + 50.0 * static_cast<double>(rng.index(5)), std::round(rng.uniform(1, 1e5))});
  }
  const auto tasks = build_tasks(recs);

  std::vector<std::string> seen;
  for (const auto& r : recs)
    if (std::find(seen.begin(), seen.end(), r.cast_code) == seen.end()) seen.push_back(r.cast_code);
  std::sort(seen.begin(), seen.end());
  REQUIRE(tasks.size() == seen.size());
  std::size_t total = 0;
  for (std::size_t k = 0; k < seen.size(); ++k) {
    std::vector<CreepRecord> members;
    for (const auto& r : recs)
      if (r.cast_code == seen[k]) members.push_back(r);
    std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
      return std::tie(a.temp_c, a.stress_mpa, a.rupture_h, a.material) <
             std::tie(b.temp_c, b.stress_mpa, b.rupture_h, b.material);
    });
    CHECK(tasks[k].cast_code == seen[k]);
    CHECK(tasks[k].records == members);
    total += tasks[k].size();
  }
  CHECK(total == recs.size());

  auto shuffled = recs;
  rng.shuffle(shuffled);
  CHECK(build_tasks(shuffled) == tasks);
  CHECK(build_tasks(flatten_tasks(tasks)) == tasks);
}

TEST_CASE("held-out tasks are the smallest") {
  std::vector<std::pair<std::string, std::size_t>> spec;
  for (std::size_t n = 1; n <= 25; ++n) spec.push_back({"T" + std::to_string(100 + n), n});
  const auto tasks = sized_tasks(spec);
  const auto split = split_meta(tasks, SplitSpec{20, 0.2, 7});
  REQUIRE(split.heldout_test.size() == 20);
  for (const auto& t : split.heldout_test) CHECK(t.size() <= 20);
  CHECK(split.validation.size() == 1);
  CHECK(split.meta_train.size() == 4);
}

TEST_CASE("size ties at the boundary go to the smaller cast code") {
  const auto tasks = sized_tasks({{"B", 5}, {"A", 5}, {"C", 3}, {"D", 9}, {"E", 9}, {"F", 9}});
  const auto split = split_meta(tasks, SplitSpec{2, 0.2, 1});
  CHECK(codes(split.heldout_test) == std::set<std::string>{"A", "C"});
}

TEST_CASE("splits partition the tasks and are reproducible") {
  SyntheticTaskConfig cfg;
  cfg.task_count = 90;
  cfg.seed = 3;
  const auto tasks = synth_tasks(cfg);
  const SplitSpec spec{20, 0.2, 11};
  const auto a = split_meta(tasks, spec);
  const auto b = split_meta(tasks, spec);
  CHECK(a.meta_train == b.meta_train);
  CHECK(a.validation == b.validation);
  CHECK(a.heldout_test == b.heldout_test);
  CHECK(a.validation.size() == 14);
  CHECK(a.meta_train.size() + a.validation.size() + a.heldout_test.size() == tasks.size());
  std::set<std::string> all;
  for (const auto* part : {&a.meta_train, &a.validation, &a.heldout_test})
    for (const auto& t : *part) CHECK(all.insert(t.cast_code).second);
  CHECK(all == codes(tasks));
  const auto c = split_meta(tasks, SplitSpec{20, 0.2, 12});
  CHECK(codes(c.heldout_test) == codes(a.heldout_test));
  CHECK(codes(c.validation) != codes(a.validation));
  const auto manifest = split_manifest(a, spec);
  CHECK(manifest["heldout_test"]["tasks"] == 20);
  CHECK(manifest["spec"]["seed"] == 11);
}

TEST_CASE("split configuration errors") {
  const auto tasks = sized_tasks({{"A", 3}, {"B", 4}});
  CHECK_THROWS_AS(split_meta(tasks, SplitSpec{2, 0.2, 0}), ConfigError);
  CHECK_THROWS_AS(split_meta(tasks, SplitSpec{0, 1.0, 0}), ConfigError);
  CHECK_THROWS_AS(split_meta(tasks, SplitSpec{0, 0.0, 0}), ConfigError);
}

TEST_CASE("featurize anchors and round trip") {
  const NormStats norm{550.0, 50.0, 3.0, 0.8};
  const auto x = featurize_x(100.0, 550.0, norm);
  CHECK(x[0] == 2.0);
  CHECK(x[1] == 0.0);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const CreepRecord r{"A", "m", rng.uniform(10, 500), rng.uniform(400, 700), std::pow(10.0, rng.uniform(0, 5))};
    const auto p = featurize(r, norm);
    CHECK(std::abs(unnormalize_y(p.y, norm) - std::log10(r.rupture_h)) <= 1e-12);
    CHECK(p.x[1] == doctest::Approx((r.temp_c - 550.0) / 50.0).epsilon(1e-14));
  }
  const auto g = unnormalize(cnp::GaussianPrediction{{0.0, 1.0}, {1.0, 0.5}}, norm);
  CHECK(g.means[1] == doctest::Approx(3.8));
  CHECK(g.stds[1] == doctest::Approx(0.4));
}

TEST_CASE("norm stats come from the given tasks only and never change") {
  SyntheticTaskConfig cfg;
  cfg.task_count = 40;
  cfg.seed = 5;
  const auto tasks = synth_tasks(cfg);
  const auto split = split_meta(tasks, SplitSpec{10, 0.25, 1});
  const auto norm = compute_norm_stats(split.meta_train);
  const auto print = norm.fingerprint();
  double ty = 0.0, tt = 0.0;
  std::size_t n = 0;
  for (const auto& t : split.meta_train)
    for (const auto& r : t.records) {
      ty += std::log10(r.rupture_h);
      tt += r.temp_c;
      ++n;
    }
  CHECK(norm.y_mean == doctest::Approx(ty / static_cast<double>(n)).epsilon(1e-12));
  CHECK(norm.temp_mean == doctest::Approx(tt / static_cast<double>(n)).epsilon(1e-12));
  CHECK(norm.temp_std > 0.0);
  featurize_tasks(split.validation, norm);
  featurize_tasks(split.heldout_test, norm);
  CHECK(norm.fingerprint() == print);
  CHECK(compute_norm_stats(split.meta_train) == norm);
  nlohmann::json j = norm;
  CHECK(j.get<NormStats>() == norm);
}

TEST_CASE("noise-free synthetic tasks lie on their lines") {
  SyntheticTaskConfig cfg;
  cfg.task_count = 20;
  cfg.noise_std = 0.0;
  cfg.seed = 6;
  const auto fam = synth_family(cfg);
  REQUIRE(fam.tasks.size() == 20);
  for (std::size_t k = 0; k < fam.tasks.size(); ++k) {
    const auto& task = fam.tasks[k];
    CHECK(task.size() >= cfg.points_min);
    CHECK(task.size() <= cfg.points_max);
    for (const auto& r : task.records) {
      const auto line = std::find_if(fam.truth[k].lines.begin(), fam.truth[k].lines.end(),
                                     [&](const LevelLine& l) { return l.temp_c == r.temp_c; });
      REQUIRE(line != fam.truth[k].lines.end());
      CHECK(line->slope < 0.0);
      CHECK(std::abs(std::log10(r.rupture_h) - (line->slope * std::log10(r.stress_mpa) + line->intercept)) < 1e-12);
      CHECK(r.stress_mpa >= 50.0);
      CHECK(r.stress_mpa <= 500.0);
    }
  }
}

TEST_CASE("synthetic generation is determined by the seed") {
  SyntheticTaskConfig cfg;
  cfg.task_count = 30;
  cfg.seed = 8;
  CHECK(synth_tasks(cfg) == synth_tasks(cfg));
  auto other = cfg;
  other.seed = 9;
  CHECK_FALSE(synth_tasks(other) == synth_tasks(cfg));
  nlohmann::json j = cfg;
  CHECK(synth_tasks(j.get<SyntheticTaskConfig>()) == synth_tasks(cfg));
}

TEST_CASE("noise-free larson-miller tasks are fitted exactly") {
  SyntheticTaskConfig cfg;
  cfg.mode = SyntheticMode::larson_miller;
  cfg.task_count = 10;
  cfg.noise_std = 0.0;
  cfg.seed = 10;
  for (const auto& task : synth_tasks(cfg)) {
    std::vector<baselines::LmObservation> obs;
    for (const auto& r : task.records) obs.push_back({r.stress_mpa, r.temp_c, r.rupture_h});
    const auto m = baselines::lm_fit(obs, 1);
    for (const auto& o : obs) {
      CHECK(std::abs(m.master_curve(std::log10(o.stress_mpa)) - baselines::lm_parameter(o.rupture_h, o.temp_c)) <
            1e-8);
    }
  }
}

TEST_CASE("synthetic config validation") {
  SyntheticTaskConfig cfg;
  cfg.noise_std = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.points_min = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
