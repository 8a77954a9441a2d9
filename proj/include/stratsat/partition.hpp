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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stratsat/vocab.hpp"

namespace stratsat {

struct SignalWeights {
  double direct = 1.0;
  double overlap = 0.5;
  double subtree = 0.7;
};

struct EdgeSignals {
  bool direct = false;   // RHS_i unifies with LHS_j
  double overlap = 0.0;  // Jaccard similarity of operator-symbol sets
  bool subtree = false;  // RHS_i unifies with a proper non-variable subterm of LHS_j

  friend bool operator==(const EdgeSignals &, const EdgeSignals &) = default;
};

struct DepEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  EdgeSignals signals;
  double weight = 0.0;
};

struct DependencyGraph {
  std::vector<std::string> rules;
  std::vector<TagId> tags;  // tag per rule, aligned with `rules`
  std::vector<DepEdge> edges;
  // Rules whose right-hand side re-enables their own left-hand side. Kept
  // out of `edges` and reported separately.
  std::vector<std::size_t> self_enabling;
};

/// Syntactic unification with variables of `a` and `b` standardized apart.
bool unifiable(const Pattern &a, const Pattern &b);
EdgeSignals edge_signals(const RewriteRule &from, const RewriteRule &to);

DependencyGraph build_dependency_graph(const Vocabulary &v, const SignalWeights &sw = {});

struct ObjectiveCoeffs {
  double alpha = 1.0;
  double beta = 0.5;
  double gamma = 0.5;
  double delta = 0.5;

  friend bool operator==(const ObjectiveCoeffs &, const ObjectiveCoeffs &) = default;
  [[nodiscard]] bool degenerate() const { return beta == 0.0 && gamma == 0.0 && delta == 0.0; }
};

/// Phase (1..k) per rule, aligned with DependencyGraph::rules.
struct PhaseAssignment {
  int k = 1;
  std::vector<int> phase;

  friend bool operator==(const PhaseAssignment &, const PhaseAssignment &) = default;
};

/// forward - backflow - phase-1 inflow - same-phase, summed over edges.
/// Throws IncompleteAssignment when `phi` does not cover every rule with a
/// phase in 1..k.
double score_assignment(const DependencyGraph &g, const PhaseAssignment &phi, const ObjectiveCoeffs &c);

struct OptimizeOptions {
  std::uint64_t seed = 0;
  int restarts = 64;            // local-search effort budget
  bool force_local = false;     // skip enumeration even when it is affordable
  double enumeration_limit = 1e6;
};

/// Exact optimum by enumeration when k^|R| <= the limit, otherwise
/// multi-restart steepest-ascent local search. The first restart starts from
/// the all-in-phase-1 assignment, so the result never scores below it.
PhaseAssignment optimize_assignment(const DependencyGraph &g, int k, const ObjectiveCoeffs &c,
                                    const OptimizeOptions &opt = {});

/// Optimizes for each k in `ks` and keeps the best score (smaller k on ties).
PhaseAssignment optimize_over_k(const DependencyGraph &g, const std::vector<int> &ks, const ObjectiveCoeffs &c,
                                const OptimizeOptions &opt = {});

/// alpha = 1; beta, gamma, delta in {0.25, 0.5, 1, 2}.
std::vector<ObjectiveCoeffs> default_grid();

struct SweepRow {
  ObjectiveCoeffs coeffs;
  PhaseAssignment assignment;
  double value = 0.0;
};

struct SweepResult {
  ObjectiveCoeffs best;
  std::vector<SweepRow> rows;  // grid order
};

/// Higher eval values are better; ties keep the earlier grid entry.
SweepResult sweep_coefficients(const DependencyGraph &g, const std::vector<ObjectiveCoeffs> &grid,
                               const std::function<double(const PhaseAssignment &)> &eval,
                               const std::vector<int> &ks = {2, 3, 4}, const OptimizeOptions &opt = {});

struct PhaseGroup {
  int phase = 1;
  std::string majority_tag;             // most frequent tag among the phase's rules
  std::vector<TagId> tags;              // tags whose rules mostly sit in this phase
  std::vector<std::string> rules;
  std::vector<std::string> exceptions;  // rules placed away from their tag's phase
};

struct PartitionAdvice {
  int k = 1;
  ObjectiveCoeffs coeffs;
  double score = 0.0;
  std::vector<PhaseGroup> phases;
  bool degenerate = false;
};

PartitionAdvice export_advice(const DependencyGraph &g, const PhaseAssignment &phi, const ObjectiveCoeffs &c);

/// Compact text for provider context.
std::string render_advice(const PartitionAdvice &a);

}  // namespace stratsat
