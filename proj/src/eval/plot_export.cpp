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

#include "cnpcreep/eval/plot_export.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cnpcreep/error.hpp"

namespace cnpcreep::eval {

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) throw ConfigError("linspace: need at least one point");
  if (points == 1) return {lo};
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return v;
}

std::vector<PlotRow> export_plot_data(const Predictor& model, std::span<const data::CreepRecord> context,
                                      std::span<const data::CreepRecord> targets,
                                      std::span<const double> temperatures_c,
                                      std::span<const double> log10_stress_grid, double band_multiplier) {
  if (log10_stress_grid.empty()) throw ConfigError("export_plot_data: stress grid is empty");
  std::vector<QueryPoint> queries;
  for (double t : temperatures_c) {
    for (double ls : log10_stress_grid) queries.push_back(QueryPoint{std::pow(10.0, ls), t});
  }
  std::vector<PlotRow> rows;
  if (!queries.empty()) {
    const auto pred = model.predict(context, queries);
    std::size_t k = 0;
    for (double t : temperatures_c) {
      for (double ls : log10_stress_grid) {
        const double mu = pred.means[k];
        const double half = pred.stds.empty() ? 0.0 : band_multiplier * pred.stds[k];
        rows.push_back(PlotRow{t, ls, mu, mu - half, mu + half, "curve"});
        ++k;
      }
    }
  }
  auto scatter = [&](std::span<const data::CreepRecord> recs, const char* kind) {
    for (const auto& r : recs) {
      const double y = std::log10(r.rupture_h);
      rows.push_back(PlotRow{r.temp_c, std::log10(r.stress_mpa), y, y, y, kind});
    }
  };
  scatter(context, "context");
  scatter(targets, "target");
  return rows;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "temperature_c,log10_stress,mu,lo2s,hi2s,kind\n";
  for (const auto& r : rows) {
    os << r.temperature_c << ',' << r.log10_stress << ',' << r.mu << ',' << r.lo2s << ',' << r.hi2s << ',' << r.kind
       << '\n';
  }
  out << os.str();
}

std::vector<PlotRow> read_plot_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "temperature_c,log10_stress,mu,lo2s,hi2s,kind") {
    throw DataError("plot csv: unexpected header");
  }
  std::vector<PlotRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = data::split_csv_line(line);
    if (f.size() != 6) throw DataError("plot csv: expected 6 fields in '" + line + "'");
    try {
      rows.push_back(PlotRow{std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4]), f[5]});
    } catch (const std::exception&) {
      throw DataError("plot csv: unparsable row '" + line + "'");
    }
  }
  return rows;
}

}  // namespace cnpcreep::eval
