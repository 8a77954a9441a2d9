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

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stratsat/rule.hpp"
#include "stratsat/term.hpp"

namespace stratsat {

struct Vocabulary;

/// Copyable owning pointer for recursive value types.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box &other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box &&) noexcept = default;
  Box &operator=(const Box &other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box &operator=(Box &&) noexcept = default;

  T &operator*() { return *ptr_; }
  const T &operator*() const { return *ptr_; }
  T *operator->() { return ptr_.get(); }
  const T *operator->() const { return ptr_.get(); }

  friend bool operator==(const Box &a, const Box &b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

enum class SimplifyMode { ExtractRebuild, Prune };

struct HintPair {
  Pattern preferred;
  Pattern pruned;

  friend bool operator==(const HintPair &, const HintPair &) = default;
};

inline constexpr double kDefaultPenalty = 10.0;
inline constexpr double kMaxPenalty = 1000.0;

struct FlowNode;

struct PhaseNode {
  std::string name;
  std::string ruleset;
  int iter_limit = 1;

  friend bool operator==(const PhaseNode &, const PhaseNode &) = default;
};

struct SequenceNode {
  std::vector<FlowNode> children;

  friend bool operator==(const SequenceNode &, const SequenceNode &) = default;
};

struct RepeatNode {
  Box<FlowNode> body;
  int rounds = 1;

  friend bool operator==(const RepeatNode &, const RepeatNode &) = default;
};

/// heuristic-simplify (no hints) or hint-simplify (prune mode with hints).
struct SimplifyNode {
  double theta = 0.0;
  SimplifyMode mode = SimplifyMode::Prune;
  bool hint_guided = false;
  std::vector<HintPair> hints;
  double penalty = kDefaultPenalty;

  friend bool operator==(const SimplifyNode &, const SimplifyNode &) = default;
};

struct FlowNode {
  std::variant<PhaseNode, SequenceNode, RepeatNode, SimplifyNode> node;
  Location where;

  // Source location is not part of the structure.
  friend bool operator==(const FlowNode &a, const FlowNode &b) { return a.node == b.node; }
};

struct RulesetDecl {
  std::string name;
  std::vector<TagId> tags;

  friend bool operator==(const RulesetDecl &, const RulesetDecl &) = default;
};

struct Strategy {
  std::string name;
  std::vector<RulesetDecl> rulesets;
  FlowNode flow;

  [[nodiscard]] const RulesetDecl *ruleset(std::string_view name) const;

  friend bool operator==(const Strategy &, const Strategy &) = default;
};

/// Throws ParseError (malformed text) or GrammarViolation (well-formed
/// s-expression that breaks the grammar's invariants).
Strategy parse_strategy(std::string_view text);
Strategy strategy_from_sexpr(const SExpr &e);

/// `(pref <pattern> prune <pattern>)`.
HintPair hint_from_sexpr(const SExpr &e);
std::string to_string(const HintPair &h);

/// Canonical concrete syntax, one flow node per line.
std::string print_strategy(const Strategy &s);
/// Single-line rendering of a flow node.
std::string print_flow(const FlowNode &n);

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string node_id;
  Location where;
  std::string message;
};

std::string to_string(const Diagnostic &d);

/// Structural checks against a vocabulary. Errors block execution; warnings
/// (a repeat body without a simplify step) do not.
std::vector<Diagnostic> validate_strategy(const Strategy &s, const Vocabulary &v);
bool has_errors(const std::vector<Diagnostic> &diags);

/// Preorder flow-node ids: the root is "0", its i-th child "0.i", and a
/// repeat body "<id>.0".
std::string child_id(const std::string &parent, std::size_t index);

std::size_t flow_depth(const FlowNode &n);
std::size_t flow_size(const FlowNode &n);

std::string_view to_string(SimplifyMode m);

}  // namespace stratsat
