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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "stratsat/interpreter.hpp"

namespace stratsat {

/// exp(mean(log v)). Throws NonPositiveValue on empty input or any v <= 0.
double geomean(std::span<const double> values);

struct ComparisonRow {
  std::string case_name;
  double baseline_cost = 0, strategy_cost = 0;
  double baseline_time = 0, strategy_time = 0;
  std::size_t baseline_peak = 0, strategy_peak = 0;
  double cost_ratio = 1;  // strategy / baseline
  double speedup = 1;     // baseline time / strategy time
  double peak_ratio = 1;  // strategy / baseline
  bool excluded = false;  // a side stopped on budget
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double geomean_cost_ratio = 1;
  double geomean_speedup = 1;
  double geomean_peak_ratio = 1;
  std::size_t excluded = 0;
};

/// Pairs records by case name. Throws CaseMismatch unless both sides cover
/// the same cases exactly once.
Comparison compare(const std::vector<RunRecord> &baseline, const std::vector<RunRecord> &strategy);

std::string render_comparison(const Comparison &c);

}  // namespace stratsat
