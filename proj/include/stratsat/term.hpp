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

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stratsat/sexpr.hpp"
#include "stratsat/symbol.hpp"

namespace stratsat {

/// Ground expression tree in prefix form, e.g. `(+ (* a b) c)`.
struct Term {
  Symbol op;
  std::vector<Term> children;

  Term() = default;
  explicit Term(Symbol op_, std::vector<Term> children_ = {}) : op(op_), children(std::move(children_)) {}
  explicit Term(std::string_view op_, std::vector<Term> children_ = {}) : op(op_), children(std::move(children_)) {}

  friend bool operator==(const Term &a, const Term &b);
};

/// Total order by symbol name, then children; stable across processes.
bool term_less(const Term &a, const Term &b);

/// Child-index route from the root of a term to one of its subterms.
using Path = std::vector<int>;

std::string to_string(const Path &path);

Term parse_term(std::string_view text);
Term term_from_sexpr(const SExpr &e);
std::string to_string(const Term &t);
SExpr to_sexpr(const Term &t);

std::size_t term_size(const Term &t);
std::size_t term_depth(const Term &t);
const Term &subterm_at(const Term &t, const Path &path);
Term replace_at(const Term &t, const Path &path, Term replacement);

/// Variable-bearing rewrite pattern. Variables are written `?name`.
struct Pattern {
  bool is_var = false;
  Symbol sym;  // operator for applications, variable name (without '?') otherwise
  std::vector<Pattern> children;

  static Pattern var(std::string_view name) { return {true, Symbol(name), {}}; }
  static Pattern app(std::string_view op, std::vector<Pattern> children = {}) {
    return {false, Symbol(op), std::move(children)};
  }

  friend bool operator==(const Pattern &a, const Pattern &b);
};

Pattern parse_pattern(std::string_view text);
Pattern pattern_from_sexpr(const SExpr &e);
std::string to_string(const Pattern &p);
SExpr to_sexpr(const Pattern &p);

/// Variables in first-occurrence order.
std::vector<Symbol> pattern_variables(const Pattern &p);
/// Non-variable symbols occurring in the pattern.
std::set<std::string> pattern_symbols(const Pattern &p);
std::size_t pattern_depth(const Pattern &p);

/// Variable name -> ground term.
using TermSubst = std::map<std::string, Term>;

Term instantiate(const Pattern &p, const TermSubst &subst);
/// Syntactic match of a pattern against a ground term; extends `subst`.
bool match_term(const Pattern &p, const Term &t, TermSubst &subst);

/// Operator arities and declared constants. Undeclared arity-0 symbols are
/// accepted as free input leaves; undeclared symbols with children are not.
struct Signature {
  std::unordered_map<Symbol, int> operators;
  std::set<std::string> constants;

  [[nodiscard]] bool empty() const { return operators.empty() && constants.empty(); }
  [[nodiscard]] bool is_constant(Symbol s) const { return constants.count(s.name()) > 0; }

  /// Throws UnknownSymbol or ArityMismatch.
  void check_node(Symbol op, std::size_t arity) const;
  void check(const Term &t) const;
  void check(const Pattern &p) const;
};

}  // namespace stratsat
