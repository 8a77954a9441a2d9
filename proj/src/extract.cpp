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

#include "stratsat/extract.hpp"

#include <cmath>

namespace stratsat {

CostModel::CostModel(std::map<std::string, double> op_costs, double default_op, double default_leaf)
    : named_(std::move(op_costs)), default_op_(default_op), default_leaf_(default_leaf) {
  auto check = [](const std::string &what, double v) {
    if (!std::isfinite(v) || v < 0) throw Error(ErrorKind::InvalidArgument, "cost of " + what + " must be finite and >= 0");
  };
  check("default operator", default_op_);
  check("default leaf", default_leaf_);
  for (const auto &[name, v] : named_) {
    check("'" + name + "'", v);
    by_symbol_.emplace(Symbol(name), v);
  }
}

CostModel CostModel::parse(std::string_view text) {
  std::map<std::string, double> costs;
  double default_op = 1.0;
  double default_leaf = 0.0;
  for (const auto &form : parse_sexprs(text)) {
    const auto &items = expect_list(form, "cost entry").items;
    if (items.empty()) throw Error(ErrorKind::ParseError, "empty cost entry", form.where);
    const auto &head = expect_atom(items[0], "cost keyword");
    if (head == "cost" && items.size() == 3) {
      auto name = expect_atom(items[1], "symbol");
      if (!costs.emplace(name, expect_number(items[2], "cost")).second) {
        throw Error(ErrorKind::ParseError, "duplicate cost for '" + name + "'", form.where);
      }
    } else if (head == "default-op" && items.size() == 2) {
      default_op = expect_number(items[1], "cost");
    } else if (head == "default-leaf" && items.size() == 2) {
      default_leaf = expect_number(items[1], "cost");
    } else {
      throw Error(ErrorKind::ParseError, "expected (cost <sym> <value>), (default-op v) or (default-leaf v)",
                  form.where);
    }
  }
  try {
    return CostModel(std::move(costs), default_op, default_leaf);
  } catch (const Error &e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

double CostModel::op_cost(Symbol op, std::size_t arity) const {
  if (auto it = by_symbol_.find(op); it != by_symbol_.end()) return it->second;
  return arity == 0 ? default_leaf_ : default_op_;
}

double CostModel::term_cost(const Term &t) const {
  double c = op_cost(t.op, t.children.size());
  for (const auto &ch : t.children) c += term_cost(ch);
  return c;
}

std::string CostModel::to_text() const {
  std::string out;
  out += "(default-op " + format_number(default_op_) + ")\n";
  out += "(default-leaf " + format_number(default_leaf_) + ")\n";
  for (const auto &[name, v] : named_) out += "(cost " + name + " " + format_number(v) + ")\n";
  return out;
}

Extractor::Extractor(const EGraph &graph, const CostModel &cm)
    : graph_(graph), cm_(cm), cost_(graph.id_bound(), kInfiniteCost), best_(graph.id_bound(), -1) {
  while (relax(true)) {
  }
  if (has_cycle()) {
    // Zero-cost operators can make ties close a loop; strict improvements cannot.
    std::fill(cost_.begin(), cost_.end(), kInfiniteCost);
    std::fill(best_.begin(), best_.end(), -1);
    while (relax(false)) {
    }
  }
}

double Extractor::node_cost(const ENode &n) const {
  double c = cm_.op_cost(n.op, n.children.size());
  for (Id ch : n.children) c += cost_[graph_.find(ch)];
  return c;
}

bool Extractor::relax(bool allow_ties) {
  bool changed = false;
  for (Id cls : graph_.class_ids()) {
    const auto &nodes = graph_.nodes(cls);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double c = node_cost(nodes[i]);
      if (!std::isfinite(c)) continue;
      int cur = best_[cls];
      bool better = c < cost_[cls];
      if (!better && allow_ties && c == cost_[cls] && cur >= 0 && static_cast<int>(i) != cur) {
        better = enode_less(nodes[i], nodes[static_cast<std::size_t>(cur)]);
      }
      if (better) {
        cost_[cls] = c;
        best_[cls] = static_cast<int>(i);
        changed = true;
      }
    }
  }
  return changed;
}

bool Extractor::has_cycle() const {
  // 0 unvisited, 1 on stack, 2 done
  std::vector<char> state(cost_.size(), 0);
  std::vector<std::pair<Id, std::size_t>> stack;
  for (Id root : graph_.class_ids()) {
    if (best_[root] < 0 || state[root]) continue;
    stack.emplace_back(root, 0);
    state[root] = 1;
    while (!stack.empty()) {
      auto &[cls, next] = stack.back();
      const ENode &n = graph_.nodes(cls)[static_cast<std::size_t>(best_[cls])];
      if (next == n.children.size()) {
        state[cls] = 2;
        stack.pop_back();
        continue;
      }
      Id ch = graph_.find(n.children[next++]);
      if (state[ch] == 1) return true;
      if (state[ch] == 0) {
        state[ch] = 1;
        stack.emplace_back(ch, 0);
      }
    }
  }
  return false;
}

double Extractor::class_cost(Id eclass) const { return cost_.at(graph_.find(eclass)); }

const ENode *Extractor::best_node(Id eclass) const {
  Id r = graph_.find(eclass);
  int b = best_.at(r);
  return b < 0 ? nullptr : &graph_.nodes(r)[static_cast<std::size_t>(b)];
}

Term Extractor::term(Id eclass) const {
  const ENode *n = best_node(eclass);
  if (!n) throw Error(ErrorKind::NoFiniteCost, "e-class " + std::to_string(eclass) + " has no finite-cost term");
  Term t{n->op};
  t.children.reserve(n->children.size());
  for (Id ch : n->children) t.children.push_back(term(ch));
  return t;
}

Extraction extract(const EGraph &graph, Id root, const CostModel &cm) {
  Extractor ex(graph, cm);
  Extraction out;
  out.term = ex.term(root);
  out.cost = ex.class_cost(root);
  return out;
}

}  // namespace stratsat
