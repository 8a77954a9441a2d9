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

#include "stratsat/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stratsat {

double score_enode(const EGraph &graph, Id eclass, const ENode &n, [[maybe_unused]] const CostModel &cm,
                   const std::vector<HintPair> &hints, double penalty, const Extractor &class_costs) {
  double score = class_costs.node_cost(n);
  for (const auto &h : hints) {
    if (graph.ematch_node(h.pruned, eclass, n).empty()) continue;
    if (graph.ematch_in(h.preferred, eclass).empty()) continue;
    return score + penalty;
  }
  return score;
}

namespace {

SimplifyReport start_report(const EGraph &g, SimplifyMode mode) {
  SimplifyReport r;
  r.mode = mode;
  r.nodes_before = r.nodes_after = g.node_count();
  r.classes_before = r.classes_after = g.class_count();
  return r;
}

void finish_report(const EGraph &g, SimplifyReport &r) {
  r.nodes_after = g.node_count();
  r.classes_after = g.class_count();
  r.pruned = r.nodes_before - r.nodes_after;
}

}  // namespace

SimplifyReport within_class_prune(EGraph &graph, const SimplifySpec &spec, const CostModel &cm) {
  graph.rebuild();
  SimplifyReport report = start_report(graph, SimplifyMode::Prune);
  if (spec.theta <= 0.0) return report;

  Extractor ex(graph, cm);
  // (class, node) pairs chosen for removal; decided before any mutation.
  std::set<std::pair<Id, std::size_t>> doomed;
  for (Id cls : graph.class_ids()) {
    const auto &nodes = graph.nodes(cls);
    std::size_t n = nodes.size();
    if (n < 2) continue;
    auto quota = static_cast<std::size_t>(std::floor(spec.theta * static_cast<double>(n)));
    quota = std::min(quota, n - 1);
    if (quota == 0) continue;

    const ENode *keep = ex.best_node(cls);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < n; ++i) {
      if (keep && nodes[i] == *keep) continue;
      ranked.emplace_back(score_enode(graph, cls, nodes[i], cm, spec.hints, spec.penalty, ex), i);
    }
    if (!keep) {
      // No finite term: keep the node that would rank best.
      auto best = std::min_element(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
        return a.first < b.first || (a.first == b.first && a.second < b.second);
      });
      ranked.erase(best);
    }
    // Worst first; among equal scores the later node in canonical order goes first.
    std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
      return a.first > b.first || (a.first == b.first && a.second > b.second);
    });
    for (std::size_t i = 0; i < std::min(quota, ranked.size()); ++i) doomed.emplace(cls, ranked[i].second);
  }
  if (doomed.empty()) return report;

  // retain() visits class nodes in their stored order, so track the index per class.
  Id current = kNoId;
  std::size_t index = 0;
  graph.retain([&](Id cls, const ENode &) {
    if (cls != current) {
      current = cls;
      index = 0;
    }
    return !doomed.count({cls, index++});
  });
  finish_report(graph, report);
  return report;
}

SimplifyReport extract_rebuild(EGraph &graph, const CostModel &cm) {
  graph.rebuild();
  SimplifyReport report = start_report(graph, SimplifyMode::ExtractRebuild);
  Extractor ex(graph, cm);
  for (Id r : graph.roots()) {
    if (!ex.best_node(r)) throw Error(ErrorKind::NoFiniteCost, "root " + std::to_string(r) + " has no finite-cost term");
  }
  graph.sweep_unreachable();
  std::vector<ENode> chosen(graph.id_bound());
  std::vector<char> has(graph.id_bound(), 0);
  for (Id cls : graph.class_ids()) {
    if (const ENode *b = ex.best_node(cls)) {
      chosen[cls] = *b;
      has[cls] = 1;
    }
  }
  // Classes without a finite term are unreachable from the chosen terms, so
  // any node may stand in until the sweep removes them.
  graph.retain([&](Id cls, const ENode &n) { return !has[cls] || n == chosen[cls]; });
  finish_report(graph, report);
  return report;
}

SimplifyReport simplify(EGraph &graph, const SimplifySpec &spec, const CostModel &cm) {
  if (spec.mode == SimplifyMode::ExtractRebuild) {
    if (spec.theta <= 0.0) {
      graph.rebuild();
      return start_report(graph, SimplifyMode::ExtractRebuild);
    }
    return extract_rebuild(graph, cm);
  }
  return within_class_prune(graph, spec, cm);
}

}  // namespace stratsat
