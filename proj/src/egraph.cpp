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

#include "stratsat/egraph.hpp"

#include <algorithm>
#include <unordered_set>

namespace stratsat {

bool enode_less(const ENode &a, const ENode &b) {
  if (a.op != b.op) return a.op.name() < b.op.name();
  return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(), b.children.end());
}

std::size_t ENodeHash::operator()(const ENode &n) const noexcept {
  std::size_t h = std::hash<std::uint32_t>{}(n.op.id()) * 0x9e3779b97f4a7c15ULL;
  for (Id c : n.children) h = (h ^ c) * 0x100000001b3ULL + (h >> 29);
  return h;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Saturated: return "saturated";
    case StopReason::IterLimit: return "iterLimit";
    case StopReason::NodeCap: return "nodeCap";
    case StopReason::TimeCap: return "timeCap";
  }
  return "unknown";
}

std::optional<StopReason> parse_stop_reason(std::string_view text) {
  for (auto r : {StopReason::Saturated, StopReason::IterLimit, StopReason::NodeCap, StopReason::TimeCap}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction

Id EGraph::new_id(const ENode &exact) {
  auto id = static_cast<Id>(node_of_.size());
  node_of_.push_back(exact);
  uf_.push_back(id);
  links_.push_back({});
  classes_.emplace_back();
  return id;
}

Id EGraph::find(Id id) const {
  if (id >= uf_.size()) throw Error(ErrorKind::InvalidId, "unknown e-class id " + std::to_string(id));
  Id root = id;
  while (uf_[root] != root) root = uf_[root];
  while (uf_[id] != root) {
    Id next = uf_[id];
    uf_[id] = root;
    id = next;
  }
  return root;
}

ENode EGraph::canonicalize(const ENode &n) const {
  ENode out{n.op, {}};
  out.children.reserve(n.children.size());
  for (Id c : n.children) out.children.push_back(find(c));
  return out;
}

EGraph::EClass &EGraph::class_of(Id canonical) {
  auto &slot = classes_.at(canonical);
  if (!slot) throw Error(ErrorKind::InvalidId, "no live e-class " + std::to_string(canonical));
  return *slot;
}

void EGraph::note_peaks() {
  peak_nodes_ = std::max(peak_nodes_, node_count_);
  peak_classes_ = std::max(peak_classes_, class_count_);
}

void EGraph::reset_peaks() {
  peak_nodes_ = node_count_;
  peak_classes_ = class_count_;
}

Id EGraph::add(const Term &t) {
  if (!signature_.empty()) signature_.check(t);
  return find(add_exact(t));
}

Id EGraph::add_node(Symbol op, std::span<const Id> children) {
  if (!signature_.empty()) signature_.check_node(op, children.size());
  ENode exact{op, {}};
  for (Id c : children) {
    (void)find(c);
    exact.children.push_back(c);
  }
  return find(add_exact_node(std::move(exact)));
}

Id EGraph::add_exact(const Term &t, bool restore) {
  ENode exact{t.op, {}};
  exact.children.reserve(t.children.size());
  for (const auto &c : t.children) exact.children.push_back(add_exact(c, restore));
  return add_exact_node(std::move(exact), restore);
}

Id EGraph::add_exact_node(ENode exact, bool restore) {
  if (auto it = memo_.find(exact); it != memo_.end()) {
    Id id = it->second;
    ENode canon = canonicalize(exact);
    if (auto h = hashcons_.find(canon); h != hashcons_.end()) {
      if (find(h->second) != find(id)) merge(id, h->second, Justification::congruence());
      return id;
    }
    if (!restore) return id;
    // The node was pruned earlier; adding it again makes it represented again.
    Id root = find(id);
    if (!classes_[root]) {
      classes_[root] = std::make_unique<EClass>();
      ++class_count_;
    }
    for (Id c : canon.children) class_of(c).parents.push_back(id);
    classes_[root]->nodes.push_back(canon);
    hashcons_.emplace(std::move(canon), id);
    ++node_count_;
    dirty_.push_back(root);
    note_peaks();
    return id;
  }

  ENode canon = canonicalize(exact);
  if (auto h = hashcons_.find(canon); h != hashcons_.end()) {
    // Congruent to an existing node: a fresh explanation node joined by congruence.
    Id existing = h->second;
    Id id = new_id(exact);
    memo_.emplace(std::move(exact), id);
    uf_[id] = find(existing);
    links_[id] = Link{existing, -1, true, 0, 0};
    return id;
  }

  Id id = new_id(exact);
  memo_.emplace(std::move(exact), id);
  for (Id c : canon.children) class_of(c).parents.push_back(id);
  classes_[id] = std::make_unique<EClass>();
  classes_[id]->nodes.push_back(canon);
  hashcons_.emplace(std::move(canon), id);
  ++node_count_;
  ++class_count_;
  note_peaks();
  return id;
}

Id EGraph::add_instantiation(const Pattern &p, std::span<const std::pair<Symbol, Id>> subst) {
  if (p.is_var) {
    for (const auto &[var, id] : subst) {
      if (var == p.sym) return id;
    }
    throw Error(ErrorKind::InvalidArgument, "unbound variable ?" + p.sym.name());
  }
  ENode exact{p.sym, {}};
  exact.children.reserve(p.children.size());
  for (const auto &c : p.children) exact.children.push_back(add_instantiation(c, subst));
  return add_exact_node(std::move(exact));
}

int EGraph::register_rule(const RewriteRule &rule) {
  if (auto it = rule_index_.find(rule.name); it != rule_index_.end()) {
    if (!(rules_[static_cast<std::size_t>(it->second)] == rule)) {
      throw Error(ErrorKind::DuplicateRule, "conflicting definitions for rule " + rule.name);
    }
    return it->second;
  }
  rules_.push_back(rule);
  int index = static_cast<int>(rules_.size() - 1);
  rule_index_.emplace(rule.name, index);
  return index;
}

// ---------------------------------------------------------------------------
// Union and rebuild

bool EGraph::merge(Id a, Id b, const Justification &why) {
  Id ra = find(a);
  Id rb = find(b);
  if (ra == rb) return false;
  link(a, b, why);

  auto weight = [&](Id r) { return classes_[r]->nodes.size() + classes_[r]->parents.size(); };
  if (weight(ra) < weight(rb)) std::swap(ra, rb);
  uf_[rb] = ra;
  std::unique_ptr<EClass> moved = std::move(classes_[rb]);
  EClass &into = *classes_[ra];
  into.nodes.insert(into.nodes.end(), moved->nodes.begin(), moved->nodes.end());
  into.parents.insert(into.parents.end(), moved->parents.begin(), moved->parents.end());
  pending_.insert(pending_.end(), moved->parents.begin(), moved->parents.end());
  dirty_.push_back(ra);
  --class_count_;
  return true;
}

void EGraph::rebuild() {
  while (!pending_.empty()) {
    std::vector<Id> todo;
    todo.swap(pending_);
    for (Id p : todo) {
      ENode canon = canonicalize(node_of_[p]);
      auto [it, inserted] = hashcons_.try_emplace(std::move(canon), p);
      if (!inserted && find(it->second) != find(p)) merge(it->second, p, Justification::congruence());
      dirty_.push_back(find(p));
    }
  }
  if (dirty_.empty()) return;
  for (Id &d : dirty_) d = find(d);
  std::sort(dirty_.begin(), dirty_.end());
  dirty_.erase(std::unique(dirty_.begin(), dirty_.end()), dirty_.end());
  for (Id r : dirty_) {
    auto &cls = classes_[r];
    if (!cls) continue;
    std::size_t before = cls->nodes.size();
    for (auto &n : cls->nodes) n = canonicalize(n);
    std::sort(cls->nodes.begin(), cls->nodes.end(), enode_less);
    cls->nodes.erase(std::unique(cls->nodes.begin(), cls->nodes.end()), cls->nodes.end());
    node_count_ -= before - cls->nodes.size();
    std::sort(cls->parents.begin(), cls->parents.end());
    cls->parents.erase(std::unique(cls->parents.begin(), cls->parents.end()), cls->parents.end());
  }
  dirty_.clear();
}

// ---------------------------------------------------------------------------
// Inspection

std::vector<Id> EGraph::class_ids() const {
  std::vector<Id> out;
  out.reserve(class_count_);
  for (Id i = 0; i < classes_.size(); ++i) {
    if (classes_[i]) out.push_back(i);
  }
  return out;
}

const std::vector<ENode> &EGraph::nodes(Id eclass) const {
  Id r = find(eclass);
  if (!classes_[r]) throw Error(ErrorKind::InvalidId, "no live e-class " + std::to_string(eclass));
  return classes_[r]->nodes;
}

void EGraph::add_root(Id id) {
  Id r = find(id);
  for (Id existing : roots_) {
    if (find(existing) == r) return;
  }
  roots_.push_back(r);
}

std::vector<Id> EGraph::roots() const {
  std::vector<Id> out;
  for (Id r : roots_) out.push_back(find(r));
  return out;
}

bool EGraph::represents(Id eclass, const Term &t) const {
  Id r = find(eclass);
  if (!classes_[r]) return false;
  for (const auto &n : classes_[r]->nodes) {
    if (n.op != t.op || n.children.size() != t.children.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i < n.children.size(); ++i) ok = represents(n.children[i], t.children[i]);
    if (ok) return true;
  }
  return false;
}

std::optional<Id> EGraph::lookup(const Term &t) const {
  ENode canon{t.op, {}};
  for (const auto &c : t.children) {
    auto id = lookup(c);
    if (!id) return std::nullopt;
    canon.children.push_back(*id);
  }
  auto it = hashcons_.find(canon);
  if (it == hashcons_.end()) return std::nullopt;
  Id r = find(it->second);
  if (!classes_[r]) return std::nullopt;
  return r;
}

Term EGraph::term_of(Id node_id) const {
  const ENode &n = node_of_.at(node_id);
  Term t{n.op};
  t.children.reserve(n.children.size());
  for (Id c : n.children) t.children.push_back(term_of(c));
  return t;
}

std::string EGraph::check_invariants() const {
  std::unordered_map<ENode, Id, ENodeHash> seen;
  std::size_t total = 0;
  std::size_t live = 0;
  for (Id id : class_ids()) {
    ++live;
    if (find(id) != id) return "class " + std::to_string(id) + " is not canonical";
    const auto &nodes = classes_[id]->nodes;
    if (nodes.empty()) return "class " + std::to_string(id) + " is empty";
    total += nodes.size();
    for (const auto &n : nodes) {
      if (!(canonicalize(n) == n)) return "non-canonical node in class " + std::to_string(id);
      for (Id c : n.children) {
        if (!classes_[find(c)]) return "node in class " + std::to_string(id) + " points at a removed class";
      }
      auto [it, inserted] = seen.emplace(n, id);
      if (!inserted) {
        return "congruence or hashcons violation: node " + n.op.name() + " in classes " +
               std::to_string(it->second) + " and " + std::to_string(id);
      }
      auto h = hashcons_.find(n);
      if (h == hashcons_.end() || find(h->second) != id) {
        return "hashcons disagrees with class table for a node of class " + std::to_string(id);
      }
    }
  }
  if (total != node_count_) return "node counter drift";
  if (live != class_count_) return "class counter drift";
  return {};
}

// ---------------------------------------------------------------------------
// E-matching

void EGraph::match_rec(const Pattern &p, Id eclass, std::vector<Id> &bind, const std::vector<Symbol> &vars,
                       std::vector<std::vector<Id>> &out) const {
  if (p.is_var) {
    auto idx = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), p.sym) - vars.begin());
    if (bind[idx] == kNoId) {
      bind[idx] = eclass;
      out.push_back(bind);
      bind[idx] = kNoId;
    } else if (bind[idx] == eclass) {
      out.push_back(bind);
    }
    return;
  }
  const auto &cls = classes_[eclass];
  if (!cls) return;
  for (const auto &n : cls->nodes) {
    if (n.op != p.sym || n.children.size() != p.children.size()) continue;
    match_node_rec(p, n, 0, bind, vars, out);
  }
}

void EGraph::match_node_rec(const Pattern &p, const ENode &node, std::size_t child, std::vector<Id> &bind,
                            const std::vector<Symbol> &vars, std::vector<std::vector<Id>> &out) const {
  if (child == p.children.size()) {
    out.push_back(bind);
    return;
  }
  std::vector<std::vector<Id>> partial;
  match_rec(p.children[child], find(node.children[child]), bind, vars, partial);
  for (auto &b : partial) match_node_rec(p, node, child + 1, b, vars, out);
}

namespace {

std::vector<Match> to_matches(std::vector<std::vector<Id>> binds, const std::vector<Symbol> &vars, Id eclass) {
  std::sort(binds.begin(), binds.end());
  binds.erase(std::unique(binds.begin(), binds.end()), binds.end());
  std::vector<Match> out;
  out.reserve(binds.size());
  for (const auto &b : binds) {
    Match m;
    m.eclass = eclass;
    for (std::size_t i = 0; i < vars.size(); ++i) m.subst.emplace_back(vars[i], b[i]);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::vector<Match> EGraph::ematch_in(const Pattern &p, Id eclass) const {
  auto vars = pattern_variables(p);
  std::vector<Id> bind(vars.size(), kNoId);
  std::vector<std::vector<Id>> binds;
  Id r = find(eclass);
  match_rec(p, r, bind, vars, binds);
  return to_matches(std::move(binds), vars, r);
}

std::vector<Match> EGraph::ematch_node(const Pattern &p, Id eclass, const ENode &node) const {
  auto vars = pattern_variables(p);
  std::vector<Id> bind(vars.size(), kNoId);
  std::vector<std::vector<Id>> binds;
  Id r = find(eclass);
  if (p.is_var) {
    match_rec(p, r, bind, vars, binds);
  } else if (node.op == p.sym && node.children.size() == p.children.size()) {
    match_node_rec(p, node, 0, bind, vars, binds);
  }
  return to_matches(std::move(binds), vars, r);
}

std::vector<Match> EGraph::ematch(const Pattern &p) const {
  auto vars = pattern_variables(p);
  std::vector<Match> out;
  std::vector<Id> bind(vars.size(), kNoId);
  for (Id r : class_ids()) {
    std::vector<std::vector<Id>> binds;
    match_rec(p, r, bind, vars, binds);
    if (binds.empty()) continue;
    auto ms = to_matches(std::move(binds), vars, r);
    out.insert(out.end(), std::make_move_iterator(ms.begin()), std::make_move_iterator(ms.end()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contraction

std::size_t EGraph::retain(const std::function<bool(Id, const ENode &)> &keep) {
  rebuild();
  std::size_t removed = 0;
  for (Id r : class_ids()) {
    auto &nodes = classes_[r]->nodes;
    std::vector<ENode> kept;
    kept.reserve(nodes.size());
    for (const auto &n : nodes) {
      if (keep(r, n)) kept.push_back(n);
    }
    if (kept.empty()) throw Error(ErrorKind::InvalidArgument, "retain would empty class " + std::to_string(r));
    removed += nodes.size() - kept.size();
    nodes = std::move(kept);
  }
  node_count_ -= removed;
  removed += sweep_unreachable();
  rebuild_indexes();
  return removed;
}

std::size_t EGraph::sweep_unreachable() {
  rebuild();
  if (roots_.empty()) return 0;
  std::vector<char> reached(classes_.size(), 0);
  std::vector<Id> stack;
  for (Id r : roots()) {
    if (classes_[r] && !reached[r]) {
      reached[r] = 1;
      stack.push_back(r);
    }
  }
  while (!stack.empty()) {
    Id c = stack.back();
    stack.pop_back();
    for (const auto &n : classes_[c]->nodes) {
      for (Id ch : n.children) {
        Id f = find(ch);
        if (!reached[f]) {
          reached[f] = 1;
          stack.push_back(f);
        }
      }
    }
  }
  std::size_t removed = 0;
  for (Id r : class_ids()) {
    if (reached[r]) continue;
    removed += classes_[r]->nodes.size();
    node_count_ -= classes_[r]->nodes.size();
    classes_[r].reset();
    --class_count_;
  }
  if (removed) rebuild_indexes();
  return removed;
}

void EGraph::rebuild_indexes() {
  std::unordered_map<ENode, Id, ENodeHash> fresh;
  fresh.reserve(node_count_);
  auto ids = class_ids();
  for (Id r : ids) {
    classes_[r]->parents.clear();
  }
  for (Id r : ids) {
    for (const auto &n : classes_[r]->nodes) {
      Id node_id = kNoId;
      if (auto it = hashcons_.find(n); it != hashcons_.end()) {
        node_id = it->second;
      } else if (auto m = memo_.find(n); m != memo_.end()) {
        node_id = m->second;
      } else {
        throw Error(ErrorKind::InvalidId, "class node without an e-node id");
      }
      fresh.emplace(n, node_id);
      for (Id ch : n.children) classes_[find(ch)]->parents.push_back(node_id);
    }
  }
  for (Id r : ids) {
    auto &parents = classes_[r]->parents;
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
  }
  hashcons_ = std::move(fresh);
}

// ---------------------------------------------------------------------------
// Saturation

SaturationReport apply_rules(EGraph &graph, std::span<const RewriteRule> rules, int iter_limit,
                             const SaturationCaps &caps) {
  graph.rebuild();
  SaturationReport rep;
  rep.nodes_before = graph.node_count();
  rep.classes_before = graph.class_count();
  for (const auto &r : rules) graph.register_rule(r);

  auto finish = [&](StopReason why) {
    rep.stop = why;
    rep.nodes_after = graph.node_count();
    rep.classes_after = graph.class_count();
    return rep;
  };
  auto over_time = [&] { return caps.deadline && std::chrono::steady_clock::now() >= *caps.deadline; };

  if (iter_limit <= 0) return finish(StopReason::IterLimit);
  if (graph.node_count() > caps.node_cap) return finish(StopReason::NodeCap);
  if (over_time()) return finish(StopReason::TimeCap);

  for (int iter = 0; iter < iter_limit; ++iter) {
    std::vector<std::vector<Match>> matches;
    matches.reserve(rules.size());
    for (const auto &r : rules) matches.push_back(graph.ematch(r.lhs));

    bool changed = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto &rule = rules[i];
      for (const auto &m : matches[i]) {
        Id lhs = graph.add_instantiation(rule.lhs, m.subst);
        Id rhs = graph.add_instantiation(rule.rhs, m.subst);
        if (graph.merge(lhs, rhs, Justification::by_rule(rule.name, m.subst))) {
          ++rep.applied;
          changed = true;
        }
      }
    }
    graph.rebuild();
    ++rep.iterations;
    if (!changed) return finish(StopReason::Saturated);
    if (graph.node_count() > caps.node_cap) return finish(StopReason::NodeCap);
    if (over_time()) return finish(StopReason::TimeCap);
  }
  return finish(StopReason::IterLimit);
}

}  // namespace stratsat
