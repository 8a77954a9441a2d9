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

#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace stratsat::testing {

std::optional<std::vector<Term>> enumerate_terms(const EGraph &g, Id eclass, int depth, std::size_t limit) {
  std::map<std::pair<Id, int>, std::vector<Term>> memo;
  bool overflow = false;
  std::function<const std::vector<Term> &(Id, int)> go = [&](Id c, int d) -> const std::vector<Term> & {
    static const std::vector<Term> kNone;
    if (d <= 0 || overflow) return kNone;
    auto key = std::pair{c, d};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Term> out;
    for (const auto &n : g.nodes(c)) {
      std::vector<std::vector<Term>> partial{{}};
      for (Id child : n.children) {
        const auto &options = go(g.find(child), d - 1);
        std::vector<std::vector<Term>> next;
        for (const auto &p : partial) {
          for (const auto &o : options) {
            next.push_back(p);
            next.back().push_back(o);
            if (next.size() > limit) {
              overflow = true;
              return kNone;
            }
          }
        }
        partial = std::move(next);
      }
      for (auto &kids : partial) out.emplace_back(n.op.name(), std::move(kids));
      if (out.size() > limit) {
        overflow = true;
        return kNone;
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  auto result = go(g.find(eclass), depth);
  if (overflow) return std::nullopt;
  return result;
}

std::optional<std::vector<Term>> enumerate_simple_terms(const EGraph &g, Id eclass, int depth, std::size_t limit) {
  std::vector<Id> ancestors;
  bool overflow = false;
  std::function<std::vector<Term>(Id, int)> go = [&](Id c, int d) -> std::vector<Term> {
    if (d <= 0 || overflow || std::find(ancestors.begin(), ancestors.end(), c) != ancestors.end()) return {};
    ancestors.push_back(c);
    std::vector<Term> out;
    for (const auto &n : g.nodes(c)) {
      std::vector<std::vector<Term>> partial{{}};
      for (Id child : n.children) {
        auto options = go(g.find(child), d - 1);
        std::vector<std::vector<Term>> next;
        for (const auto &p : partial) {
          for (const auto &o : options) {
            next.push_back(p);
            next.back().push_back(o);
          }
        }
        partial = std::move(next);
        if (partial.size() > limit) overflow = true;
        if (overflow || partial.empty()) break;
      }
      if (overflow) break;
      for (auto &kids : partial) {
        if (kids.size() == n.children.size()) out.emplace_back(n.op.name(), std::move(kids));
      }
      if (out.size() > limit) overflow = true;
    }
    ancestors.pop_back();
    return out;
  };
  auto result = go(g.find(eclass), depth);
  if (overflow) return std::nullopt;
  return result;
}

PlainCosts toy_costs() {
  return {{{"+", 2}, {"*", 3}, {"neg", 1}, {"vec2", 1}, {"vecadd", 3}, {"vecmul", 4}, {"vecmac", 5}, {"0", 0}}, 1.0, 0.0};
}

double plain_cost(const Term &t, const PlainCosts &c) {
  double own;
  if (auto it = c.ops.find(t.op.name()); it != c.ops.end()) {
    own = it->second;
  } else {
    own = t.children.empty() ? c.default_leaf : c.default_op;
  }
  for (const auto &k : t.children) own += plain_cost(k, c);
  return own;
}

double min_cost(const std::vector<Term> &terms, const PlainCosts &c) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &t : terms) best = std::min(best, plain_cost(t, c));
  return best;
}

Term random_toy_term(Rng &rng, std::size_t max_nodes, int max_depth) {
  static const char *const kLeaves[] = {"a", "b", "c", "d", "e", "f", "g", "h", "0"};
  static const std::pair<const char *, int> kOps[] = {{"+", 2},      {"*", 2},      {"neg", 1},   {"vec2", 2},
                                                      {"vecadd", 2}, {"vecmul", 2}, {"vecmac", 3}};
  // Nodes still to hand out, counting one per pending child so that
  // siblings never run the tree past max_nodes.
  auto budget = static_cast<long>(max_nodes) - 1;
  std::function<Term(int)> go = [&](int depth) -> Term {
    if (depth <= 1 || budget < 3 || draw(rng, 3) == 0) return Term(kLeaves[draw(rng, 9)]);
    const auto &[op, arity] = kOps[draw(rng, 7)];
    budget -= arity;
    std::vector<Term> kids;
    for (int i = 0; i < arity; ++i) kids.push_back(go(depth - 1));
    return Term(op, std::move(kids));
  };
  return go(max_depth);
}

DependencyGraph random_dependency_graph(Rng &rng, std::size_t n, double edge_probability) {
  DependencyGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    g.rules.push_back("r" + std::to_string(i));
    g.tags.push_back("t" + std::to_string(draw(rng, 3)));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || unit(rng) >= edge_probability) continue;
      DepEdge e;
      e.from = i;
      e.to = j;
      e.weight = 0.1 + 2.0 * unit(rng);
      g.edges.push_back(e);
    }
  }
  return g;
}

double naive_score(const DependencyGraph &g, const std::vector<int> &phase, int k, const ObjectiveCoeffs &c) {
  (void)k;
  std::size_t n = g.rules.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (const auto &e : g.edges) w[e.from][e.to] += e.weight;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double wij = w[i][j];
      if (wij == 0.0) continue;
      double term = 0.0;
      if (phase[j] == phase[i] + 1) term += c.alpha * wij;
      if (phase[i] > phase[j]) term -= c.beta * wij;
      if (phase[j] == 1 && phase[i] != 1) term -= c.gamma * wij;
      if (phase[i] == phase[j]) term -= c.delta * wij;
      total += term;
    }
  }
  return total;
}

double exhaustive_optimum(const DependencyGraph &g, int k, const ObjectiveCoeffs &c) {
  std::vector<int> phase(g.rules.size(), 1);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == phase.size()) {
      best = std::max(best, naive_score(g, phase, k, c));
      return;
    }
    for (int p = 1; p <= k; ++p) {
      phase[i] = p;
      go(i + 1);
    }
  };
  go(0);
  return best;
}

namespace {

Pattern random_pattern(Rng &rng, int depth) {
  static const char *const kVars[] = {"x", "y", "z"};
  if (depth <= 1 || draw(rng, 3) == 0) {
    if (draw(rng, 2) == 0) return Pattern::var(kVars[draw(rng, 3)]);
    return Pattern::app(draw(rng, 2) == 0 ? "a" : "0");
  }
  static const std::pair<const char *, int> kOps[] = {{"+", 2}, {"*", 2}, {"vecadd", 2}, {"vecmul", 2}, {"neg", 1}};
  const auto &[op, arity] = kOps[draw(rng, 5)];
  std::vector<Pattern> kids;
  for (int i = 0; i < arity; ++i) kids.push_back(random_pattern(rng, depth - 1));
  return Pattern::app(op, std::move(kids));
}

double random_fraction(Rng &rng) {
  static const double kValues[] = {0.0, 0.1, 0.25, 0.3, 0.5, 0.75, 1.0, 0.125};
  return kValues[draw(rng, 8)];
}

FlowNode random_flow(Rng &rng, int depth, const std::vector<RulesetDecl> &rulesets) {
  static const char *const kPhaseNames[] = {"p", "q", "grow", "fuse"};
  FlowNode n;
  auto kind = depth <= 1 ? draw(rng, 2) : draw(rng, 4);
  if (kind == 0) {
    const auto &rs = rulesets[draw(rng, rulesets.size())];
    n.node = PhaseNode{kPhaseNames[draw(rng, 4)], rs.name, 1 + static_cast<int>(draw(rng, 20))};
  } else if (kind == 1) {
    SimplifyNode s;
    s.theta = random_fraction(rng);
    if (draw(rng, 2) == 0) {
      s.hint_guided = true;
      for (auto h = draw(rng, 3); h > 0; --h) {
        HintPair hp{random_pattern(rng, 3), random_pattern(rng, 3)};
        if (!(hp.preferred == hp.pruned)) s.hints.push_back(std::move(hp));
      }
      if (draw(rng, 2) == 0) s.penalty = static_cast<double>(draw(rng, 100));
    } else if (draw(rng, 2) == 0) {
      s.mode = SimplifyMode::ExtractRebuild;
    }
    n.node = std::move(s);
  } else if (kind == 2) {
    SequenceNode seq;
    for (auto c = 1 + draw(rng, 3); c > 0; --c) seq.children.push_back(random_flow(rng, depth - 1, rulesets));
    n.node = std::move(seq);
  } else {
    n.node = RepeatNode{random_flow(rng, depth - 1, rulesets), 1 + static_cast<int>(draw(rng, 30))};
  }
  return n;
}

}  // namespace

Strategy random_strategy(Rng &rng, int max_depth) {
  static const char *const kTags[] = {"scalar-norm", "expose", "vec-lifting", "vec-mac-opt"};
  Strategy s;
  s.name = "gen" + std::to_string(draw(rng, 1000));
  auto count = 1 + draw(rng, 3);
  for (std::uint64_t i = 0; i < count; ++i) {
    RulesetDecl r{"rs" + std::to_string(i), {}};
    std::vector<int> order{0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);
    for (auto t = 1 + draw(rng, 4); t > 0; --t) r.tags.push_back(kTags[order[t - 1]]);
    s.rulesets.push_back(std::move(r));
  }
  s.flow = random_flow(rng, max_depth, s.rulesets);
  return s;
}

}  // namespace stratsat::testing
