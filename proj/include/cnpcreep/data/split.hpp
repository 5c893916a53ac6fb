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

#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "cnpcreep/data/records.hpp"

namespace cnpcreep::data {

struct SplitSpec {
  std::size_t heldout_count = 20;
  double validation_fraction = 0.20;
  std::uint64_t seed = 0;
};

/// Disjoint partition of the tasks. Each part is sorted by cast code.
struct MetaSplit {
  std::vector<TaskDataset> meta_train;
  std::vector<TaskDataset> validation;
  std::vector<TaskDataset> heldout_test;
};

/// Held-out: the heldout_count smallest tasks (ties go to the smaller cast
/// code). The rest is split at task level by a seeded shuffle, with
/// round(validation_fraction * remaining) tasks for validation, leaving at
/// least one training task.
MetaSplit split_meta(const std::vector<TaskDataset>& tasks, const SplitSpec& spec);

/// Cast codes per split, seed and counts.
nlohmann::json split_manifest(const MetaSplit& split, const SplitSpec& spec);

void to_json(nlohmann::json& j, const SplitSpec& s);
void from_json(const nlohmann::json& j, SplitSpec& s);

}  // namespace cnpcreep::data
