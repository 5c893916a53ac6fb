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

#include "cnpcreep/data/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include "cnpcreep/error.hpp"

namespace cnpcreep::data {

std::string validate_record(const CreepRecord& r) {
  if (r.cast_code.empty()) return "empty cast code";
  if (!std::isfinite(r.stress_mpa) || !std::isfinite(r.temp_c) || !std::isfinite(r.rupture_h)) {
    return "non-finite value";
  }
  if (!(r.stress_mpa > 0.0)) return "nonpositive stress";
  if (!(r.rupture_h > 0.0)) return "nonpositive rupture time";
  if (!(r.temp_c > -273.15)) return "temperature at or below absolute zero";
  return {};
}

void from_json(const nlohmann::json& j, CsvSchema& s) {
  s = CsvSchema{};
  for (const auto& [key, value] : j.items()) {
    if (!s.aliases.contains(key)) throw ConfigError("csv schema: unknown column '" + key + "'");
    if (value.is_string()) {
      s.aliases[key] = {value.get<std::string>()};
    } else {
      s.aliases[key] = value.get<std::vector<std::string>>();
    }
  }
}

void to_json(nlohmann::json& j, const CsvSchema& s) { j = s.aliases; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

}  // namespace

LoadResult load_csv(std::istream& in, const CsvSchema& schema, bool strict) {
  LoadResult result;
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  std::map<std::string, std::size_t> column;
  for (const auto& [key, names] : schema.aliases) {
    for (const auto& name : names) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it != header.end()) {
        column[key] = static_cast<std::size_t>(it - header.begin());
        break;
      }
    }
    if (!column.contains(key)) {
      std::string expected;
      for (const auto& name : names) expected += (expected.empty() ? "" : " | ") + name;
      throw DataError("csv: missing column '" + expected + "' (" + key + ")");
    }
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    auto reject = [&](const std::string& message) {
      if (strict) throw DataError("csv line " + std::to_string(line_no) + ": " + message);
      result.rejected.push_back(RowError{line_no, message});
    };
    if (fields.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
      continue;
    }
    CreepRecord r;
    r.cast_code = trim(fields[column["cast_code"]]);
    r.material = trim(fields[column["material"]]);
    bool ok = true;
    for (auto [key, target] : {std::pair{"stress", &r.stress_mpa}, std::pair{"temperature", &r.temp_c},
                               std::pair{"rupture_time", &r.rupture_h}}) {
      const auto& text = fields[column[key]];
      auto v = parse_real(text);
      if (!v) {
        reject(std::string("unparsable ") + key + " '" + trim(text) + "'");
        ok = false;
        break;
      }
      *target = *v;
    }
    if (!ok) continue;
    if (auto problem = validate_record(r); !problem.empty()) {
      reject(problem);
      continue;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema, bool strict) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return load_csv(in, schema, strict);
}

namespace {
std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}
}  // namespace

void write_csv(std::ostream& out, const std::vector<CreepRecord>& records) {
  out << "cast_code,material,stress_mpa,temp_c,time_h\n";
  std::ostringstream row;
  row << std::setprecision(17);
  for (const auto& r : records) {
    row.str({});
    row << quote_if_needed(r.cast_code) << ',' << quote_if_needed(r.material) << ',' << r.stress_mpa << ','
        << r.temp_c << ',' << r.rupture_h << '\n';
    out << row.str();
  }
}

std::vector<TaskDataset> build_tasks(const std::vector<CreepRecord>& records) {
  std::map<std::string, std::vector<CreepRecord>> groups;
  for (const auto& r : records) groups[r.cast_code].push_back(r);
  std::vector<TaskDataset> tasks;
  tasks.reserve(groups.size());
  for (auto& [code, recs] : groups) {
    std::sort(recs.begin(), recs.end(), [](const CreepRecord& a, const CreepRecord& b) {
      return std::tie(a.temp_c, a.stress_mpa, a.rupture_h, a.material) <
             std::tie(b.temp_c, b.stress_mpa, b.rupture_h, b.material);
    });
    tasks.push_back(TaskDataset{code, std::move(recs)});
  }
  return tasks;
}

std::vector<CreepRecord> flatten_tasks(const std::vector<TaskDataset>& tasks) {
  std::vector<CreepRecord> out;
  for (const auto& t : tasks) out.insert(out.end(), t.records.begin(), t.records.end());
  return out;
}

}  // namespace cnpcreep::data
