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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratsat/extract.hpp"
#include "stratsat/simplify.hpp"
#include "stratsat/strategy.hpp"
#include "stratsat/vocab.hpp"

namespace stratsat {

/// Resource limits for one run. Caps are checked at iteration boundaries.
struct Budget {
  double time_seconds = 600.0;
  std::size_t node_cap = 1'000'000;
  std::optional<int> max_iter_limit;  // clamps every phase's iteration limit
  std::optional<int> max_rounds;      // clamps every repeat's round count
  int iter_divisor = 1;               // phase iteration limits become ceil(limit / divisor)
};

enum class RunStop { Completed, NodeCap, TimeCap };
std::string_view to_string(RunStop s);
std::optional<RunStop> parse_run_stop(std::string_view text);

struct TraceEntry {
  enum class Kind { Phase, Simplify, RepeatRound };
  std::string node_id;
  Kind kind = Kind::Phase;
  std::string label;  // phase name, simplify mode, or round number
  std::optional<SaturationReport> saturation;
  std::optional<SimplifyReport> simplify;
  std::optional<double> cost_after;  // empty when extraction failed
  std::size_t nodes_after = 0;
  std::size_t classes_after = 0;
  std::size_t peak_nodes = 0;
  std::size_t peak_classes = 0;

  friend bool operator==(const TraceEntry &, const TraceEntry &) = default;
};

std::string_view to_string(TraceEntry::Kind k);

struct RunRecord {
  std::string case_name;
  std::string strategy_name;  // "full" for unguided saturation
  std::uint64_t seed = 0;
  Term initial_term;
  double initial_cost = 0.0;
  Term final_term;
  double final_cost = 0.0;
  std::size_t peak_nodes = 0;
  std::size_t peak_classes = 0;
  RunStop stop = RunStop::Completed;
  std::vector<TraceEntry> trace;
  // Machine-dependent measurements; never part of determinism checks.
  double wall_seconds = 0.0;
  std::optional<long> peak_rss_kb;

  [[nodiscard]] bool budget_stopped() const { return stop != RunStop::Completed; }
};

/// Everything but wall time and RSS.
bool same_outcome(const RunRecord &a, const RunRecord &b);

struct RunResult {
  RunRecord record;
  EGraph graph;
  Id root = kNoId;
};

/// Interprets the flow tree depth-first against a fresh e-graph holding the
/// case. Throws ValidationFailed when the strategy has errors against `v`.
RunResult run_strategy(const Strategy &s, const Term &input, const Vocabulary &v, const CostModel &cm,
                       const Budget &budget, std::uint64_t seed = 0, std::string case_name = {});

RunRecord execute_strategy(const Strategy &s, const Term &input, const Vocabulary &v, const CostModel &cm,
                           const Budget &budget, std::uint64_t seed = 0, std::string case_name = {});

/// Unguided saturation with every rule until saturation or budget.
RunResult run_full(const Term &input, const Vocabulary &v, const CostModel &cm, const Budget &budget,
                   std::uint64_t seed = 0, std::string case_name = {});

/// Process peak resident set size, where the platform reports it.
std::optional<long> sample_peak_rss_kb();

}  // namespace stratsat
