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

// Independent reference implementations and generators shared by the unit
// tests and the acceptance driver. Nothing here calls the code it checks.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stratsat/egraph.hpp"
#include "stratsat/partition.hpp"
#include "stratsat/strategy.hpp"

namespace stratsat::testing {

using Rng = std::mt19937_64;

inline std::uint64_t draw(Rng &rng, std::uint64_t n) { return rng() % n; }

/// Every term the class represents with depth <= `depth` (a leaf has depth
/// 1), or nullopt once more than `limit` terms would be produced.
std::optional<std::vector<Term>> enumerate_terms(const EGraph &g, Id eclass, int depth, std::size_t limit);

/// Represented terms of depth <= `depth` in which no class occurs twice on
/// any root-to-leaf path. Under non-negative costs every represented term can
/// be shortened into one of these without raising its cost, so their minimum
/// is the minimum over all represented terms of that depth. Nullopt past
/// `limit` terms.
std::optional<std::vector<Term>> enumerate_simple_terms(const EGraph &g, Id eclass, int depth, std::size_t limit);

struct PlainCosts {
  std::map<std::string, double> ops;
  double default_op = 1.0;
  double default_leaf = 0.0;
};

/// The toy cost table, typed in independently of the library's copy.
PlainCosts toy_costs();

double plain_cost(const Term &t, const PlainCosts &c);

/// Smallest plain_cost over the terms, +inf when empty.
double min_cost(const std::vector<Term> &terms, const PlainCosts &c);

/// Random term over the toy operators: +, *, neg, vec2, vecadd, vecmul,
/// vecmac, leaves a-h and 0.
Term random_toy_term(Rng &rng, std::size_t max_nodes, int max_depth);

/// Random dependency graph with `n` rules; edges carry random positive weights.
DependencyGraph random_dependency_graph(Rng &rng, std::size_t n, double edge_probability);

/// Phase objective recomputed pair by pair from a dense weight matrix.
double naive_score(const DependencyGraph &g, const std::vector<int> &phase, int k, const ObjectiveCoeffs &c);

/// Best score over all k^n assignments by plain recursion.
double exhaustive_optimum(const DependencyGraph &g, int k, const ObjectiveCoeffs &c);

/// Random strategy drawn from the grammar. Ruleset names, tags and phase
/// names come from small pools; hints use toy operators.
Strategy random_strategy(Rng &rng, int max_depth);

}  // namespace stratsat::testing
