// Copyright 2026 The stratsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stratsat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "stratsat/sexpr.hpp"

namespace stratsat {

double geomean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::NonPositiveValue, "geometric mean of no values");
  double sum = 0;
  for (double v : values) {
    if (!(v > 0)) throw Error(ErrorKind::NonPositiveValue, "geometric mean needs positive values");
    sum += std::log(v);
  }
  return std::exp(sum / static_cast<double>(values.size()));
}

namespace {

// Clock resolution floor so that near-instant runs give finite speedups.
constexpr double kMinSeconds = 1e-6;

double ratio(double num, double den) {
  if (num == den) return 1.0;
  return num / den;
}

std::map<std::string, const RunRecord *> by_case(const std::vector<RunRecord> &records, std::string_view side) {
  std::map<std::string, const RunRecord *> out;
  for (const auto &r : records) {
    if (!out.emplace(r.case_name, &r).second) {
      throw Error(ErrorKind::CaseMismatch, std::string(side) + " has case '" + r.case_name + "' twice");
    }
  }
  return out;
}

}  // namespace

Comparison compare(const std::vector<RunRecord> &baseline, const std::vector<RunRecord> &strategy) {
  auto base = by_case(baseline, "baseline");
  auto strat = by_case(strategy, "strategy");
  if (base.size() != strat.size() ||
      !std::equal(base.begin(), base.end(), strat.begin(), [](const auto &a, const auto &b) { return a.first == b.first; })) {
    throw Error(ErrorKind::CaseMismatch, "baseline and strategy records cover different cases");
  }
  Comparison c;
  std::vector<double> costs, speedups, peaks;
  for (const auto &[name, b] : base) {
    const RunRecord *s = strat.at(name);
    ComparisonRow row;
    row.case_name = name;
    row.baseline_cost = b->final_cost;
    row.strategy_cost = s->final_cost;
    row.baseline_time = b->wall_seconds;
    row.strategy_time = s->wall_seconds;
    row.baseline_peak = b->peak_nodes;
    row.strategy_peak = s->peak_nodes;
    row.cost_ratio = ratio(row.strategy_cost, row.baseline_cost);
    row.speedup = ratio(std::max(row.baseline_time, kMinSeconds), std::max(row.strategy_time, kMinSeconds));
    row.peak_ratio = ratio(static_cast<double>(row.strategy_peak), static_cast<double>(row.baseline_peak));
    row.excluded = b->budget_stopped() || s->budget_stopped();
    if (row.excluded) {
      ++c.excluded;
    } else {
      costs.push_back(row.cost_ratio);
      speedups.push_back(row.speedup);
      peaks.push_back(row.peak_ratio);
    }
    c.rows.push_back(row);
  }
  if (!costs.empty()) {
    c.geomean_cost_ratio = geomean(costs);
    c.geomean_speedup = geomean(speedups);
    c.geomean_peak_ratio = geomean(peaks);
  }
  return c;
}

std::string render_comparison(const Comparison &c) {
  std::ostringstream out;
  out << "case\tbase_cost\tstrat_cost\tcost_ratio\tbase_peak\tstrat_peak\tpeak_ratio\tspeedup\n";
  for (const auto &r : c.rows) {
    out << r.case_name << (r.excluded ? "*" : "") << '\t' << format_number(r.baseline_cost) << '\t'
        << format_number(r.strategy_cost) << '\t' << format_number(r.cost_ratio) << '\t' << r.baseline_peak << '\t'
        << r.strategy_peak << '\t' << format_number(r.peak_ratio) << '\t' << format_number(r.speedup) << '\n';
  }
  out << "geomean\t\t\t" << format_number(c.geomean_cost_ratio) << "\t\t\t" << format_number(c.geomean_peak_ratio)
      << '\t' << format_number(c.geomean_speedup) << '\n';
  if (c.excluded) out << "* budget-stopped, excluded from geomeans: " << c.excluded << '\n';
  return out.str();
}

}  // namespace stratsat
