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

#include <algorithm>
#include <unordered_map>

#include "stratsat/egraph.hpp"

namespace stratsat {

void EGraph::reroot(Id x) {
  Link carried{};
  Id cur = x;
  while (cur != kNoId) {
    Link old = links_[cur];
    links_[cur] = carried;
    carried = old;
    carried.next = cur;
    carried.forward = !old.forward;
    cur = old.next;
  }
}

void EGraph::link(Id a, Id b, const Justification &why) {
  Link l;
  l.next = b;
  if (why.kind == Justification::Kind::Rule) {
    auto it = rule_index_.find(why.rule);
    if (it == rule_index_.end()) throw Error(ErrorKind::InvalidArgument, "merge names unregistered rule " + why.rule);
    l.rule = it->second;
    l.subst_begin = static_cast<std::uint32_t>(subst_pool_.size());
    l.subst_len = static_cast<std::uint32_t>(why.subst.size());
    subst_pool_.insert(subst_pool_.end(), why.subst.begin(), why.subst.end());
  }
  reroot(a);
  links_[a] = l;
}

std::optional<std::pair<std::optional<Id>, Id>> EGraph::locate(const Term &t) const {
  ENode exact{t.op, {}};
  ENode canon{t.op, {}};
  bool exact_ok = true;
  for (const auto &c : t.children) {
    auto found = locate(c);
    if (!found) return std::nullopt;
    if (found->first) {
      exact.children.push_back(*found->first);
    } else {
      exact_ok = false;
    }
    canon.children.push_back(found->second);
  }
  if (exact_ok) {
    if (auto it = memo_.find(exact); it != memo_.end()) return std::pair{std::optional<Id>(it->second), find(it->second)};
  }
  if (auto it = hashcons_.find(canon); it != hashcons_.end()) {
    return std::pair{std::optional<Id>(), find(it->second)};
  }
  return std::nullopt;
}

Explanation EGraph::explain(const Term &s, const Term &t) {
  rebuild();
  auto ls = locate(s);
  auto lt = locate(t);
  if (!ls || !lt || ls->second != lt->second) {
    throw Error(ErrorKind::NotEquivalent, to_string(s) + " and " + to_string(t) + " are not in the same e-class");
  }
  Id a = add_exact(s, false);
  Id b = add_exact(t, false);
  Explanation out;
  out.terms.push_back(s);
  explain_ids(a, b, {}, out);
  return out;
}

void EGraph::explain_ids(Id a, Id b, const Path &path, Explanation &out) const {
  if (a == b) return;
  std::unordered_map<Id, std::size_t> depth_of;
  std::vector<Id> up_a;
  for (Id x = a; x != kNoId; x = links_[x].next) {
    depth_of.emplace(x, up_a.size());
    up_a.push_back(x);
  }
  std::vector<Id> up_b;
  Id lca = b;
  while (!depth_of.count(lca)) {
    up_b.push_back(lca);
    lca = links_[lca].next;
    if (lca == kNoId) throw Error(ErrorKind::InvalidExplanation, "ids are not connected in the proof forest");
  }

  auto traverse = [&](Id from, Id to, const Link &l, bool forward) {
    if (l.rule < 0) {
      const ENode &nf = node_of_[from];
      const ENode &nt = node_of_[to];
      for (std::size_t i = 0; i < nf.children.size(); ++i) {
        Path child = path;
        child.push_back(static_cast<int>(i));
        explain_ids(nf.children[i], nt.children[i], child, out);
      }
      return;
    }
    if (out.steps.size() >= step_limit_) {
      throw Error(ErrorKind::ExplanationTooLarge, "explanation exceeds " + std::to_string(step_limit_) + " steps");
    }
    ExplanationStep step;
    step.rule = rules_[static_cast<std::size_t>(l.rule)].name;
    step.path = path;
    step.forward = forward;
    for (std::uint32_t i = 0; i < l.subst_len; ++i) {
      const auto &[var, node] = subst_pool_[l.subst_begin + i];
      step.subst.emplace(var.name(), term_of(node));
    }
    Term next = replace_at(out.terms.back(), path, term_of(to));
    out.steps.push_back(std::move(step));
    out.terms.push_back(std::move(next));
  };

  std::size_t stop = depth_of.at(lca);
  for (std::size_t i = 0; i < stop; ++i) {
    const Link &l = links_[up_a[i]];
    traverse(up_a[i], l.next, l, l.forward);
  }
  for (std::size_t i = up_b.size(); i-- > 0;) {
    const Link &l = links_[up_b[i]];
    traverse(l.next, up_b[i], l, !l.forward);
  }
}

void replay_explanation(const Explanation &e, std::span<const RewriteRule> rules) {
  if (e.terms.size() != e.steps.size() + 1) {
    throw Error(ErrorKind::InvalidExplanation, "explanation needs exactly one more term than steps");
  }
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    const auto &step = e.steps[i];
    auto where = "step " + std::to_string(i) + " (" + step.rule + " at " + to_string(step.path) + "): ";
    auto rule = std::find_if(rules.begin(), rules.end(), [&](const RewriteRule &r) { return r.name == step.rule; });
    if (rule == rules.end()) throw Error(ErrorKind::InvalidExplanation, where + "unknown rule");
    const Pattern &from = step.forward ? rule->lhs : rule->rhs;
    const Pattern &to = step.forward ? rule->rhs : rule->lhs;
    const Term *sub = nullptr;
    try {
      sub = &subterm_at(e.terms[i], step.path);
    } catch (const Error &) {
      throw Error(ErrorKind::InvalidExplanation, where + "path leaves the term");
    }
    TermSubst bound;
    if (!match_term(from, *sub, bound)) {
      throw Error(ErrorKind::InvalidExplanation, where + "rule does not match " + to_string(*sub));
    }
    for (const auto &[var, term] : bound) {
      auto it = step.subst.find(var);
      if (it != step.subst.end() && !(it->second == term)) {
        throw Error(ErrorKind::InvalidExplanation, where + "substitution disagrees for ?" + var);
      }
    }
    for (const auto &[var, term] : step.subst) bound.emplace(var, term);
    Term expected;
    try {
      expected = replace_at(e.terms[i], step.path, instantiate(to, bound));
    } catch (const Error &err) {
      throw Error(ErrorKind::InvalidExplanation, where + err.what());
    }
    if (!(expected == e.terms[i + 1])) {
      throw Error(ErrorKind::InvalidExplanation, where + "result differs from the next term");
    }
  }
}

}  // namespace stratsat
