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

#include <vector>

#include "stratsat/extract.hpp"
#include "stratsat/strategy.hpp"

namespace stratsat {

struct SimplifySpec {
  double theta = 0.0;
  SimplifyMode mode = SimplifyMode::Prune;
  std::vector<HintPair> hints;
  double penalty = kDefaultPenalty;

  static SimplifySpec from_node(const SimplifyNode &n) { return {n.theta, n.mode, n.hints, n.penalty}; }
};

struct SimplifyReport {
  std::size_t nodes_before = 0;
  std::size_t nodes_after = 0;
  std::size_t classes_before = 0;
  std::size_t classes_after = 0;
  std::size_t pruned = 0;  // nodes removed, including those dropped by the reachability sweep
  SimplifyMode mode = SimplifyMode::Prune;

  friend bool operator==(const SimplifyReport &, const SimplifyReport &) = default;
};

/// s(n) = c(n) + p(n). c(n) is the operator cost plus the current class
/// costs of the children; p(n) is `penalty` when `n` heads a match of some
/// hint's pruned pattern while its class also represents that hint's
/// preferred pattern.
double score_enode(const EGraph &graph, Id eclass, const ENode &n, const CostModel &cm,
                   const std::vector<HintPair> &hints, double penalty, const Extractor &class_costs);

/// Drops the worst-scoring floor(theta * n) nodes of every class with n >= 2
/// nodes, never the greedy-selected node and never the last node, then sweeps
/// unreachable classes.
SimplifyReport within_class_prune(EGraph &graph, const SimplifySpec &spec, const CostModel &cm);

/// Contracts the graph to the greedy-best term of every root.
/// Throws NoFiniteCost when a root has no finite term.
SimplifyReport extract_rebuild(EGraph &graph, const CostModel &cm);

/// Dispatches on spec.mode. theta = 0 leaves the graph untouched in both modes.
SimplifyReport simplify(EGraph &graph, const SimplifySpec &spec, const CostModel &cm);

}  // namespace stratsat
