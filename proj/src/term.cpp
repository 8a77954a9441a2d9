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

#include "stratsat/term.hpp"

#include <algorithm>

namespace stratsat {

bool operator==(const Term &a, const Term &b) { return a.op == b.op && a.children == b.children; }

bool term_less(const Term &a, const Term &b) {
  if (a.op != b.op) return a.op.name() < b.op.name();
  return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(), b.children.end(),
                                      term_less);
}

std::string to_string(const Path &path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(path[i]);
  }
  out += ']';
  return out;
}

Term term_from_sexpr(const SExpr &e) {
  if (e.is_string()) throw Error(ErrorKind::ParseError, "strings are not terms", e.where);
  if (e.is_atom()) {
    if (e.text.empty() || e.text.front() == '?') {
      throw Error(ErrorKind::ParseError, "variable '" + e.text + "' in ground term", e.where);
    }
    return Term(e.text);
  }
  if (e.items.empty()) throw Error(ErrorKind::ParseError, "empty term", e.where);
  const auto &head = expect_atom(e.items.front(), "operator symbol");
  if (head.front() == '?') throw Error(ErrorKind::ParseError, "variable in operator position", e.where);
  Term t{head};
  t.children.reserve(e.items.size() - 1);
  for (std::size_t i = 1; i < e.items.size(); ++i) t.children.push_back(term_from_sexpr(e.items[i]));
  return t;
}

Term parse_term(std::string_view text) { return term_from_sexpr(parse_sexpr(text)); }

SExpr to_sexpr(const Term &t) {
  if (t.children.empty()) return SExpr::atom(t.op.name());
  std::vector<SExpr> items;
  items.reserve(t.children.size() + 1);
  items.push_back(SExpr::atom(t.op.name()));
  for (const auto &c : t.children) items.push_back(to_sexpr(c));
  return SExpr::list(std::move(items));
}

std::string to_string(const Term &t) { return to_string(to_sexpr(t)); }

std::size_t term_size(const Term &t) {
  std::size_t n = 1;
  for (const auto &c : t.children) n += term_size(c);
  return n;
}

std::size_t term_depth(const Term &t) {
  std::size_t d = 0;
  for (const auto &c : t.children) d = std::max(d, term_depth(c));
  return d + 1;
}

const Term &subterm_at(const Term &t, const Path &path) {
  const Term *cur = &t;
  for (int i : path) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->children.size()) {
      throw Error(ErrorKind::InvalidArgument, "path " + to_string(path) + " leaves the term");
    }
    cur = &cur->children[static_cast<std::size_t>(i)];
  }
  return *cur;
}

namespace {

Term replace_rec(const Term &t, const Path &path, std::size_t depth, Term &replacement) {
  if (depth == path.size()) return std::move(replacement);
  int i = path[depth];
  if (i < 0 || static_cast<std::size_t>(i) >= t.children.size()) {
    throw Error(ErrorKind::InvalidArgument, "path " + to_string(path) + " leaves the term");
  }
  Term out{t.op, t.children};
  out.children[static_cast<std::size_t>(i)] = replace_rec(t.children[static_cast<std::size_t>(i)], path, depth + 1,
                                                          replacement);
  return out;
}

}  // namespace

Term replace_at(const Term &t, const Path &path, Term replacement) { return replace_rec(t, path, 0, replacement); }

bool operator==(const Pattern &a, const Pattern &b) {
  return a.is_var == b.is_var && a.sym == b.sym && a.children == b.children;
}

Pattern pattern_from_sexpr(const SExpr &e) {
  if (e.is_string()) throw Error(ErrorKind::ParseError, "strings are not patterns", e.where);
  if (e.is_atom()) {
    if (e.text.front() == '?') {
      if (e.text.size() == 1) throw Error(ErrorKind::ParseError, "empty variable name", e.where);
      return Pattern::var(std::string_view(e.text).substr(1));
    }
    return Pattern::app(e.text);
  }
  if (e.items.empty()) throw Error(ErrorKind::ParseError, "empty pattern", e.where);
  const auto &head = expect_atom(e.items.front(), "operator symbol");
  if (head.front() == '?') throw Error(ErrorKind::ParseError, "variable in operator position", e.where);
  Pattern p = Pattern::app(head);
  for (std::size_t i = 1; i < e.items.size(); ++i) p.children.push_back(pattern_from_sexpr(e.items[i]));
  return p;
}

Pattern parse_pattern(std::string_view text) { return pattern_from_sexpr(parse_sexpr(text)); }

SExpr to_sexpr(const Pattern &p) {
  if (p.is_var) return SExpr::atom("?" + p.sym.name());
  if (p.children.empty()) return SExpr::atom(p.sym.name());
  std::vector<SExpr> items{SExpr::atom(p.sym.name())};
  for (const auto &c : p.children) items.push_back(to_sexpr(c));
  return SExpr::list(std::move(items));
}

std::string to_string(const Pattern &p) { return to_string(to_sexpr(p)); }

namespace {

void collect_vars(const Pattern &p, std::vector<Symbol> &out) {
  if (p.is_var) {
    if (std::find(out.begin(), out.end(), p.sym) == out.end()) out.push_back(p.sym);
    return;
  }
  for (const auto &c : p.children) collect_vars(c, out);
}

void collect_symbols(const Pattern &p, std::set<std::string> &out) {
  if (p.is_var) return;
  out.insert(p.sym.name());
  for (const auto &c : p.children) collect_symbols(c, out);
}

}  // namespace

std::vector<Symbol> pattern_variables(const Pattern &p) {
  std::vector<Symbol> out;
  collect_vars(p, out);
  return out;
}

std::set<std::string> pattern_symbols(const Pattern &p) {
  std::set<std::string> out;
  collect_symbols(p, out);
  return out;
}

std::size_t pattern_depth(const Pattern &p) {
  std::size_t d = 0;
  for (const auto &c : p.children) d = std::max(d, pattern_depth(c));
  return d + 1;
}

Term instantiate(const Pattern &p, const TermSubst &subst) {
  if (p.is_var) {
    auto it = subst.find(p.sym.name());
    if (it == subst.end()) throw Error(ErrorKind::InvalidArgument, "unbound variable ?" + p.sym.name());
    return it->second;
  }
  Term t{p.sym};
  t.children.reserve(p.children.size());
  for (const auto &c : p.children) t.children.push_back(instantiate(c, subst));
  return t;
}

bool match_term(const Pattern &p, const Term &t, TermSubst &subst) {
  if (p.is_var) {
    auto [it, inserted] = subst.emplace(p.sym.name(), t);
    return inserted || it->second == t;
  }
  if (p.sym != t.op || p.children.size() != t.children.size()) return false;
  for (std::size_t i = 0; i < p.children.size(); ++i) {
    if (!match_term(p.children[i], t.children[i], subst)) return false;
  }
  return true;
}

void Signature::check_node(Symbol op, std::size_t arity) const {
  if (auto it = operators.find(op); it != operators.end()) {
    if (static_cast<std::size_t>(it->second) != arity) {
      throw Error(ErrorKind::ArityMismatch, "'" + op.name() + "' expects " + std::to_string(it->second) +
                                                " children, got " + std::to_string(arity));
    }
    return;
  }
  if (is_constant(op)) {
    if (arity != 0) throw Error(ErrorKind::ArityMismatch, "constant '" + op.name() + "' takes no children");
    return;
  }
  if (arity != 0) throw Error(ErrorKind::UnknownSymbol, "unknown operator '" + op.name() + "'");
}

void Signature::check(const Term &t) const {
  check_node(t.op, t.children.size());
  for (const auto &c : t.children) check(c);
}

void Signature::check(const Pattern &p) const {
  if (p.is_var) return;
  check_node(p.sym, p.children.size());
  for (const auto &c : p.children) check(c);
}

}  // namespace stratsat
