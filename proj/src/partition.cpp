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

#include "stratsat/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace stratsat {
namespace {

using Bindings = std::map<std::string, Pattern>;

Pattern rename(const Pattern &p, const std::string &prefix) {
  if (p.is_var) return Pattern::var(prefix + p.sym.name());
  Pattern out = Pattern::app(p.sym.name());
  for (const auto &c : p.children) out.children.push_back(rename(c, prefix));
  return out;
}

const Pattern &walk(const Pattern &p, const Bindings &b) {
  const Pattern *cur = &p;
  while (cur->is_var) {
    auto it = b.find(cur->sym.name());
    if (it == b.end()) break;
    cur = &it->second;
  }
  return *cur;
}

bool occurs(const std::string &var, const Pattern &p, const Bindings &b) {
  const Pattern &q = walk(p, b);
  if (q.is_var) return q.sym.name() == var;
  return std::any_of(q.children.begin(), q.children.end(), [&](const Pattern &c) { return occurs(var, c, b); });
}

bool unify(const Pattern &x, const Pattern &y, Bindings &b) {
  const Pattern &a = walk(x, b);
  const Pattern &c = walk(y, b);
  if (a.is_var && c.is_var && a.sym == c.sym) return true;
  if (a.is_var) {
    if (occurs(a.sym.name(), c, b)) return false;
    b.emplace(a.sym.name(), c);
    return true;
  }
  if (c.is_var) return unify(c, a, b);
  if (a.sym != c.sym || a.children.size() != c.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!unify(a.children[i], c.children[i], b)) return false;
  }
  return true;
}

void proper_subterms(const Pattern &p, std::vector<const Pattern *> &out) {
  for (const auto &c : p.children) {
    if (c.is_var) continue;
    out.push_back(&c);
    proper_subterms(c, out);
  }
}

double jaccard(const std::set<std::string> &a, const std::set<std::string> &b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto &s : a) common += b.count(s);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

}  // namespace

bool unifiable(const Pattern &a, const Pattern &b) {
  Bindings bindings;
  return unify(rename(a, "l."), rename(b, "r."), bindings);
}

EdgeSignals edge_signals(const RewriteRule &from, const RewriteRule &to) {
  EdgeSignals s;
  s.direct = unifiable(from.rhs, to.lhs);
  s.overlap = jaccard(pattern_symbols(from.rhs), pattern_symbols(to.lhs));
  std::vector<const Pattern *> subs;
  proper_subterms(to.lhs, subs);
  s.subtree = std::any_of(subs.begin(), subs.end(), [&](const Pattern *p) { return unifiable(from.rhs, *p); });
  return s;
}

DependencyGraph build_dependency_graph(const Vocabulary &v, const SignalWeights &sw) {
  DependencyGraph g;
  for (const auto &r : v.rules) {
    g.rules.push_back(r.name);
    g.tags.push_back(r.tag);
  }
  for (std::size_t i = 0; i < v.rules.size(); ++i) {
    for (std::size_t j = 0; j < v.rules.size(); ++j) {
      auto s = edge_signals(v.rules[i], v.rules[j]);
      double w = sw.direct * (s.direct ? 1.0 : 0.0) + sw.overlap * s.overlap + sw.subtree * (s.subtree ? 1.0 : 0.0);
      if (i == j) {
        if (s.direct) g.self_enabling.push_back(i);
        continue;
      }
      if (w > 0.0) g.edges.push_back({i, j, s, w});
    }
  }
  return g;
}

double score_assignment(const DependencyGraph &g, const PhaseAssignment &phi, const ObjectiveCoeffs &c) {
  if (phi.phase.size() != g.rules.size()) {
    throw Error(ErrorKind::IncompleteAssignment, "assignment covers " + std::to_string(phi.phase.size()) + " of " +
                                                     std::to_string(g.rules.size()) + " rules");
  }
  for (int p : phi.phase) {
    if (p < 1 || p > phi.k) throw Error(ErrorKind::IncompleteAssignment, "phase " + std::to_string(p) + " outside 1..k");
  }
  double forward = 0, backflow = 0, inflow = 0, same = 0;
  for (const auto &e : g.edges) {
    int pi = phi.phase[e.from];
    int pj = phi.phase[e.to];
    if (pi + 1 == pj) forward += e.weight;
    if (pi > pj) backflow += e.weight;
    if (pj == 1 && pi != 1) inflow += e.weight;
    if (pi == pj) same += e.weight;
  }
  return c.alpha * forward - c.beta * backflow - c.gamma * inflow - c.delta * same;
}

namespace {

PhaseAssignment enumerate(const DependencyGraph &g, int k, const ObjectiveCoeffs &c) {
  PhaseAssignment cur{k, std::vector<int>(g.rules.size(), 1)};
  PhaseAssignment best = cur;
  double best_score = score_assignment(g, cur, c);
  while (true) {
    std::size_t i = 0;
    while (i < cur.phase.size() && cur.phase[i] == k) cur.phase[i++] = 1;
    if (i == cur.phase.size()) break;
    ++cur.phase[i];
    double s = score_assignment(g, cur, c);
    if (s > best_score) {
      best_score = s;
      best = cur;
    }
  }
  return best;
}

PhaseAssignment local_search(const DependencyGraph &g, int k, const ObjectiveCoeffs &c, const OptimizeOptions &opt) {
  std::mt19937_64 rng(opt.seed);
  std::size_t n = g.rules.size();
  PhaseAssignment best{k, std::vector<int>(n, 1)};
  double best_score = score_assignment(g, best, c);
  for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
    PhaseAssignment cur{k, std::vector<int>(n, 1)};
    if (restart > 0) {
      for (auto &p : cur.phase) p = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k));
    }
    double cur_score = score_assignment(g, cur, c);
    while (true) {
      double move_score = cur_score;
      std::size_t move_rule = n;
      int move_phase = 0;
      for (std::size_t i = 0; i < n; ++i) {
        int keep = cur.phase[i];
        for (int p = 1; p <= k; ++p) {
          if (p == keep) continue;
          cur.phase[i] = p;
          double s = score_assignment(g, cur, c);
          if (s > move_score + 1e-12) {
            move_score = s;
            move_rule = i;
            move_phase = p;
          }
        }
        cur.phase[i] = keep;
      }
      if (move_rule == n) break;
      cur.phase[move_rule] = move_phase;
      cur_score = move_score;
    }
    if (cur_score > best_score) {
      best_score = cur_score;
      best = cur;
    }
  }
  return best;
}

}  // namespace

PhaseAssignment optimize_assignment(const DependencyGraph &g, int k, const ObjectiveCoeffs &c,
                                    const OptimizeOptions &opt) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  double space = std::pow(static_cast<double>(k), static_cast<double>(g.rules.size()));
  if (!opt.force_local && space <= opt.enumeration_limit) return enumerate(g, k, c);
  return local_search(g, k, c, opt);
}

PhaseAssignment optimize_over_k(const DependencyGraph &g, const std::vector<int> &ks, const ObjectiveCoeffs &c,
                                const OptimizeOptions &opt) {
  if (ks.empty()) throw Error(ErrorKind::InvalidArgument, "no phase counts to try");
  std::optional<PhaseAssignment> best;
  double best_score = 0;
  for (int k : ks) {
    auto phi = optimize_assignment(g, k, c, opt);
    double s = score_assignment(g, phi, c);
    if (!best || s > best_score) {
      best = phi;
      best_score = s;
    }
  }
  return *best;
}

std::vector<ObjectiveCoeffs> default_grid() {
  const double values[] = {0.25, 0.5, 1.0, 2.0};
  std::vector<ObjectiveCoeffs> grid;
  for (double b : values) {
    for (double gm : values) {
      for (double d : values) grid.push_back({1.0, b, gm, d});
    }
  }
  return grid;
}

SweepResult sweep_coefficients(const DependencyGraph &g, const std::vector<ObjectiveCoeffs> &grid,
                               const std::function<double(const PhaseAssignment &)> &eval, const std::vector<int> &ks,
                               const OptimizeOptions &opt) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty coefficient grid");
  SweepResult out;
  std::optional<double> best;
  for (const auto &c : grid) {
    SweepRow row{c, optimize_over_k(g, ks, c, opt), 0.0};
    row.value = eval(row.assignment);
    if (!best || row.value > *best) {
      best = row.value;
      out.best = c;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

PartitionAdvice export_advice(const DependencyGraph &g, const PhaseAssignment &phi, const ObjectiveCoeffs &c) {
  PartitionAdvice a;
  a.k = phi.k;
  a.coeffs = c;
  a.score = score_assignment(g, phi, c);
  a.degenerate = c.degenerate();
  // Each tag goes to the phase holding most of its rules (earliest on ties).
  std::map<TagId, std::vector<int>> per_tag;
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    auto &counts = per_tag[g.tags[i]];
    counts.resize(static_cast<std::size_t>(phi.k) + 1, 0);
    ++counts[static_cast<std::size_t>(phi.phase[i])];
  }
  std::map<TagId, int> tag_phase;
  for (const auto &[tag, counts] : per_tag) {
    tag_phase[tag] = static_cast<int>(std::max_element(counts.begin() + 1, counts.end()) - counts.begin());
  }
  for (int p = 1; p <= phi.k; ++p) {
    PhaseGroup grp;
    grp.phase = p;
    std::map<TagId, int> counts;
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
      if (phi.phase[i] != p) continue;
      grp.rules.push_back(g.rules[i]);
      ++counts[g.tags[i]];
      if (tag_phase[g.tags[i]] != p) grp.exceptions.push_back(g.rules[i]);
    }
    int top = 0;
    for (const auto &[tag, n] : counts) {
      if (n > top) {
        top = n;
        grp.majority_tag = tag;
      }
    }
    // Tags in vocabulary order.
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
      const auto &t = g.tags[i];
      if (tag_phase[t] == p && std::find(grp.tags.begin(), grp.tags.end(), t) == grp.tags.end()) grp.tags.push_back(t);
    }
    a.phases.push_back(std::move(grp));
  }
  return a;
}

std::string render_advice(const PartitionAdvice &a) {
  std::string out = "k=" + std::to_string(a.k) + " score=" + format_number(a.score);
  if (a.degenerate) out += " (degenerate coefficients)";
  for (const auto &p : a.phases) {
    out += "\nphase " + std::to_string(p.phase) + ":";
    for (const auto &t : p.tags) out += " " + t;
    if (!p.exceptions.empty()) {
      out += " | exceptions:";
      for (const auto &r : p.exceptions) out += " " + r;
    }
  }
  return out;
}

}  // namespace stratsat
