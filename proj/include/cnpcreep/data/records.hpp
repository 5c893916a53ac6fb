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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace cnpcreep::data {

/// One creep-rupture test.
struct CreepRecord {
  std::string cast_code;
  std::string material;
  double stress_mpa = 0.0;
  double temp_c = 0.0;
  double rupture_h = 0.0;

  friend bool operator==(const CreepRecord&, const CreepRecord&) = default;
};

/// Empty string if the record is valid, otherwise the first violated invariant.
std::string validate_record(const CreepRecord& r);

/// All records of one cast code: the unit of meta-learning.
struct TaskDataset {
  std::string cast_code;
  std::vector<CreepRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  friend bool operator==(const TaskDataset&, const TaskDataset&) = default;
};

/// Accepted header names for each logical column. The first alias found in
/// the header wins.
struct CsvSchema {
  std::map<std::string, std::vector<std::string>> aliases{
      {"cast_code", {"cast_code"}},
      {"material", {"material"}},
      {"stress", {"stress_mpa"}},
      {"temperature", {"temp_c"}},
      {"rupture_time", {"time_h"}},
  };
};

void from_json(const nlohmann::json& j, CsvSchema& s);
void to_json(nlohmann::json& j, const CsvSchema& s);

struct RowError {
  std::size_t line = 0;  ///< 1-based; the header is line 1
  std::string message;
};

struct LoadResult {
  std::vector<CreepRecord> records;
  std::vector<RowError> rejected;
};

/// Parses one CSV line, honouring double-quoted fields ("" escapes a quote).
std::vector<std::string> split_csv_line(const std::string& line);

/// Reads creep records. A missing column is always a DataError naming it.
/// Bad rows are collected in `rejected`, or raised as DataError when `strict`.
LoadResult load_csv(std::istream& in, const CsvSchema& schema = {}, bool strict = false);
LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema = {}, bool strict = false);

/// Writes records under the default column names, reals at 17 significant digits.
void write_csv(std::ostream& out, const std::vector<CreepRecord>& records);

/// Groups by cast code. Tasks are sorted by cast code; records within a task
/// by (temperature, stress, rupture time, material).
std::vector<TaskDataset> build_tasks(const std::vector<CreepRecord>& records);

/// Concatenates task records in task order.
std::vector<CreepRecord> flatten_tasks(const std::vector<TaskDataset>& tasks);

}  // namespace cnpcreep::data
