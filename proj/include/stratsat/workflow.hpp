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
#include <deque>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "stratsat/action.hpp"
#include "stratsat/interpreter.hpp"
#include "stratsat/motif.hpp"
#include "stratsat/partition.hpp"
#include "stratsat/provider.hpp"

namespace stratsat {

struct EvolutionCase {
  std::string name;
  Term term;
};

struct ScriptedProviderSpec {
  std::string script_text;
};

using ProviderSpec = std::variant<ScriptedProviderSpec, HttpProviderConfig>;

struct SessionConfig {
  std::string vocab_text;
  Vocabulary vocab;  // filled by start_session when the text has untagged rules
  CostModel costs;
  std::vector<EvolutionCase> cases;
  std::uint64_t seed = 0;
  int max_iterations = 32;
  Budget full_budget;
  std::size_t minimal_node_cap = 5000;
  std::size_t promising_capacity = 4;
  std::size_t pending_capacity = 8;
  std::size_t cache_capacity = kDefaultCacheCapacity;
  std::size_t top_motifs = kDefaultTopMotifs;
  std::size_t digest_char_limit = 16384;
  std::size_t explanation_step_limit = 10000;
  std::size_t max_flow_depth = 4;
  std::size_t max_flow_nodes = 32;
  ObjectiveCoeffs coeffs;
  std::vector<int> partition_ks{2, 3, 4};
  std::optional<Strategy> seed_strategy;
  ProviderSpec provider = ScriptedProviderSpec{};
};

/// Parses a `(session ...)` form. Relative paths resolve against `base_dir`.
/// Fields: (vocab path) (costs path) (case path)+ (seed n) (max-iterations n)
/// (budget full seconds node-cap) (budget minimal node-cap)
/// (capacity promising|pending|cache n) (digest-limit n) (top-motifs n)
/// (explain-limit n) (coeffs alpha beta gamma delta) (seed-strategy path)
/// and (provider scripted path) or (provider http (endpoint url) (model m)
/// (key-env VAR) (timeout s)).
SessionConfig parse_session_config(std::string_view text, const std::string &base_dir);
SessionConfig load_session_config(const std::string &path);

std::unique_ptr<ProposalProvider> make_provider(const SessionConfig &c);

/// Per-tier limits derived from the full budget.
Budget budget_for(BudgetMode mode, const SessionConfig &c);

enum class Origin { SeedTemplate, Generated, Tuned };
std::string_view to_string(Origin o);

struct EvaluationRecord {
  int id = -1;
  int strategy_id = -1;
  BudgetMode mode = BudgetMode::Full;
  std::vector<RunRecord> runs;  // evolution-case order
  std::vector<bool> success;    // final cost strictly below initial cost
  double geomean_cost = 0.0;
  double mean_cost = 0.0;
  std::size_t max_peak_nodes = 0;
  double total_seconds = 0.0;
  std::size_t motif_updates = 0;

  [[nodiscard]] std::size_t successes() const;
  /// Full and reduced: at least one success. Minimal: every case completes
  /// within its caps without a cost regression.
  [[nodiscard]] bool passed() const;
};

/// Recomputes the aggregate fields from `runs` and `success`.
void aggregate(EvaluationRecord &e);

struct StrategyRecord {
  int id = -1;
  Strategy strategy;
  Origin origin = Origin::Generated;
  std::optional<int> parent;
  std::vector<int> evaluations;
};

struct SessionState {
  std::vector<StrategyRecord> records;  // index == id
  std::optional<int> best;
  std::vector<int> promising;
  std::deque<int> pending;
  MotifCache motif_cache;
  std::optional<PartitionAdvice> partition_advice;
  std::string hint_context;
  std::vector<HintPair> hints;
  std::vector<EvaluationRecord> eval_log;
  std::vector<std::string> last_rejection;
  int iteration = 0;
  std::uint64_t rng_seed = 0;
  bool stopped = false;

  [[nodiscard]] const EvaluationRecord *latest(int record, BudgetMode mode) const;
};

/// Fresh state. Fills `c.vocab` (asking the provider for a tag table when the
/// vocabulary has untagged rules) and enqueues the seed strategy if any.
SessionState start_session(SessionConfig &c, ProposalProvider &p);

/// Rules and cases are taken from `c`. Throws ValidationFailed.
EvaluationRecord evaluate(const Strategy &s, BudgetMode mode, const SessionConfig &c);

/// The actions the provider may choose from, rendered as action templates.
std::vector<std::string> legal_actions(const SessionState &s, const SessionConfig &c);

/// Applies tuning knobs to a copy of `s`. Throws InvalidProposal.
Strategy apply_knobs(const Strategy &s, const std::vector<Knob> &knobs);

/// One decide-execute-feedback step. When `log` is given it receives the
/// step's transcript entry.
SessionState step_session(SessionState s, ProposalProvider &p, const SessionConfig &c, nlohmann::json *log = nullptr);

/// Throws NoEvaluatedStrategy unless best has a full evaluation over every
/// evolution case.
Strategy select_final(const SessionState &s, const SessionConfig &c);

/// Ruleset skeleton from partition advice: one phase per non-empty group,
/// in phase order, each running that group's tags.
Strategy strategy_from_advice(const PartitionAdvice &a, int iter_limit = 4, std::string name = "advised");

/// Bounded text context for the provider; never contains e-graph contents.
std::string digest_state(const SessionState &s, const SessionConfig &c);

/// Steps until stop or max_iterations, writing a header line and one JSON
/// line per step to `transcript` when given.
SessionState run_session(SessionConfig &c, ProposalProvider &p, std::ostream *transcript = nullptr);

}  // namespace stratsat
