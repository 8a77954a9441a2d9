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

#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "stratsat/egraph.hpp"

namespace stratsat {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// Per-symbol operator costs. Node cost is the operator cost plus the chosen
/// child costs. Symbols without an entry fall back to the leaf or operator
/// default depending on arity.
class CostModel {
 public:
  CostModel() = default;
  CostModel(std::map<std::string, double> op_costs, double default_op = 1.0, double default_leaf = 0.0);

  /// Parses `(cost <sym> <value>)` forms, plus optional `(default-op v)` and
  /// `(default-leaf v)`. Negative or non-finite values are rejected.
  static CostModel parse(std::string_view text);

  [[nodiscard]] double op_cost(Symbol op, std::size_t arity) const;
  [[nodiscard]] double term_cost(const Term &t) const;

  [[nodiscard]] const std::map<std::string, double> &op_costs() const { return named_; }
  [[nodiscard]] double default_op() const { return default_op_; }
  [[nodiscard]] double default_leaf() const { return default_leaf_; }

  [[nodiscard]] std::string to_text() const;

 private:
  std::map<std::string, double> named_;
  std::unordered_map<Symbol, double> by_symbol_;
  double default_op_ = 1.0;
  double default_leaf_ = 0.0;
};

/// Greedy bottom-up extraction: class costs relaxed to a fixpoint, then the
/// cheapest node per class with ties broken by (symbol name, child ids).
class Extractor {
 public:
  Extractor(const EGraph &graph, const CostModel &cm);

  /// +inf when the class has no finite-cost term.
  [[nodiscard]] double class_cost(Id eclass) const;
  /// Selected node, or nullptr when the class cost is infinite.
  [[nodiscard]] const ENode *best_node(Id eclass) const;
  /// Cost of a node under the current class costs.
  [[nodiscard]] double node_cost(const ENode &n) const;
  /// Throws NoFiniteCost when the class cost is infinite.
  [[nodiscard]] Term term(Id eclass) const;

 private:
  bool relax(bool allow_ties);
  [[nodiscard]] bool has_cycle() const;

  const EGraph &graph_;
  const CostModel &cm_;
  std::vector<double> cost_;
  std::vector<int> best_;  // index into graph_.nodes(class), -1 when none
};

struct Extraction {
  Term term;
  double cost = kInfiniteCost;
};

Extraction extract(const EGraph &graph, Id root, const CostModel &cm);

}  // namespace stratsat
