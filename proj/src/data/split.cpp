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

#include "cnpcreep/data/split.hpp"

#include <algorithm>
#include <cmath>

#include "cnpcreep/error.hpp"
#include "cnpcreep/random.hpp"

namespace cnpcreep::data {

namespace {
void sort_by_code(std::vector<TaskDataset>& tasks) {
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskDataset& a, const TaskDataset& b) { return a.cast_code < b.cast_code; });
}
}  // namespace

MetaSplit split_meta(const std::vector<TaskDataset>& tasks, const SplitSpec& spec) {
  if (!(spec.validation_fraction > 0.0 && spec.validation_fraction < 1.0)) {
    throw ConfigError("split: validation_fraction must lie in (0, 1)");
  }
  if (tasks.size() <= spec.heldout_count) {
    throw ConfigError("split: " + std::to_string(tasks.size()) + " tasks cannot hold out " +
                      std::to_string(spec.heldout_count));
  }

  std::vector<const TaskDataset*> by_size;
  for (const auto& t : tasks) by_size.push_back(&t);
  std::sort(by_size.begin(), by_size.end(), [](const TaskDataset* a, const TaskDataset* b) {
    if (a->size() != b->size()) return a->size() < b->size();
    return a->cast_code < b->cast_code;
  });

  MetaSplit split;
  for (std::size_t i = 0; i < spec.heldout_count; ++i) split.heldout_test.push_back(*by_size[i]);

  std::vector<TaskDataset> rest;
  for (std::size_t i = spec.heldout_count; i < by_size.size(); ++i) rest.push_back(*by_size[i]);
  sort_by_code(rest);
  Rng rng(spec.seed);
  rng.shuffle(rest);

  auto n_val = static_cast<std::size_t>(std::llround(spec.validation_fraction * static_cast<double>(rest.size())));
  n_val = std::min(n_val, rest.size() - 1);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    (i < n_val ? split.validation : split.meta_train).push_back(std::move(rest[i]));
  }
  sort_by_code(split.meta_train);
  sort_by_code(split.validation);
  sort_by_code(split.heldout_test);
  return split;
}

nlohmann::json split_manifest(const MetaSplit& split, const SplitSpec& spec) {
  auto part = [](const std::vector<TaskDataset>& tasks) {
    nlohmann::json codes = nlohmann::json::array();
    std::size_t records = 0;
    for (const auto& t : tasks) {
      codes.push_back(t.cast_code);
      records += t.size();
    }
    return nlohmann::json{{"cast_codes", std::move(codes)}, {"tasks", tasks.size()}, {"records", records}};
  };
  return nlohmann::json{{"spec", spec},
                        {"meta_train", part(split.meta_train)},
                        {"validation", part(split.validation)},
                        {"heldout_test", part(split.heldout_test)}};
}

void to_json(nlohmann::json& j, const SplitSpec& s) {
  j = nlohmann::json{
      {"heldout_count", s.heldout_count}, {"validation_fraction", s.validation_fraction}, {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SplitSpec& s) {
  SplitSpec d;
  s.heldout_count = j.value("heldout_count", d.heldout_count);
  s.validation_fraction = j.value("validation_fraction", d.validation_fraction);
  s.seed = j.value("seed", d.seed);
}

}  // namespace cnpcreep::data
