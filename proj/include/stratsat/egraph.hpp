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

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "stratsat/rule.hpp"
#include "stratsat/term.hpp"

namespace stratsat {

using Id = std::uint32_t;
inline constexpr Id kNoId = std::numeric_limits<Id>::max();

struct ENode {
  Symbol op;
  boost::container::small_vector<Id, 3> children;

  friend bool operator==(const ENode &a, const ENode &b) { return a.op == b.op && a.children == b.children; }
};

/// (symbol name, child ids) order used for deterministic tie-breaks.
bool enode_less(const ENode &a, const ENode &b);

struct ENodeHash {
  std::size_t operator()(const ENode &n) const noexcept;
};

/// Why two e-nodes were unioned.
struct Justification {
  enum class Kind { Congruence, Rule };
  Kind kind = Kind::Congruence;
  std::string rule;
  std::vector<std::pair<Symbol, Id>> subst;  // variable -> e-node id at union time

  static Justification congruence() { return {}; }
  static Justification by_rule(std::string name, std::vector<std::pair<Symbol, Id>> subst = {}) {
    return {Kind::Rule, std::move(name), std::move(subst)};
  }
};

/// One e-matching result. Substitution entries follow the pattern's
/// first-occurrence variable order and hold canonical class ids.
struct Match {
  std::vector<std::pair<Symbol, Id>> subst;
  Id eclass = kNoId;

  friend bool operator==(const Match &, const Match &) = default;
};

struct ExplanationStep {
  std::string rule;
  Path path;
  bool forward = true;  // lhs -> rhs when true
  TermSubst subst;
};

/// Alternating terms and rule edges: terms[i] --steps[i]--> terms[i+1].
/// Congruence is folded into each step's path.
struct Explanation {
  std::vector<Term> terms;
  std::vector<ExplanationStep> steps;
};

enum class StopReason { Saturated, IterLimit, NodeCap, TimeCap };
std::string_view to_string(StopReason r);
std::optional<StopReason> parse_stop_reason(std::string_view text);

struct SaturationCaps {
  std::size_t node_cap = std::numeric_limits<std::size_t>::max();
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SaturationReport {
  int iterations = 0;
  std::size_t applied = 0;
  std::size_t nodes_before = 0;
  std::size_t nodes_after = 0;
  std::size_t classes_before = 0;
  std::size_t classes_after = 0;
  StopReason stop = StopReason::Saturated;

  friend bool operator==(const SaturationReport &, const SaturationReport &) = default;
};

/// Hash-consed e-graph with union-find, deferred congruence rebuilding and an
/// explanation forest. Every e-node ever created keeps its id; class ids are
/// the ids of representative e-nodes.
///
/// Not thread-safe; confine one instance to one run.
class EGraph {
 public:
  EGraph() = default;
  explicit EGraph(Signature signature) : signature_(std::move(signature)) {}

  EGraph(EGraph &&) noexcept = default;
  EGraph &operator=(EGraph &&) noexcept = default;
  EGraph(const EGraph &) = delete;
  EGraph &operator=(const EGraph &) = delete;

  /// Adds a term and returns its canonical class. Throws UnknownSymbol /
  /// ArityMismatch against the signature.
  Id add(const Term &t);

  /// Adds a node whose children are existing ids; returns the canonical class.
  Id add_node(Symbol op, std::span<const Id> children);

  [[nodiscard]] Id find(Id id) const;

  /// Merges the classes of a and b, recording `why` in the explanation forest.
  /// Returns false when they were already equal.
  bool merge(Id a, Id b, const Justification &why);

  /// Restores the hashcons invariant and congruence closure.
  void rebuild();
  [[nodiscard]] bool needs_rebuild() const { return !pending_.empty(); }

  [[nodiscard]] std::vector<Match> ematch(const Pattern &p) const;
  /// Matches of `p` rooted in one class only.
  [[nodiscard]] std::vector<Match> ematch_in(const Pattern &p, Id eclass) const;
  /// Matches of `p` rooted at one specific canonical node of `eclass`.
  [[nodiscard]] std::vector<Match> ematch_node(const Pattern &p, Id eclass, const ENode &node) const;

  /// Does the class represent `t` (structurally, through current membership)?
  [[nodiscard]] bool represents(Id eclass, const Term &t) const;
  /// Class holding `t`, without inserting anything.
  [[nodiscard]] std::optional<Id> lookup(const Term &t) const;

  void add_root(Id id);
  [[nodiscard]] std::vector<Id> roots() const;

  [[nodiscard]] std::size_t node_count() const { return node_count_; }
  [[nodiscard]] std::size_t class_count() const { return class_count_; }
  [[nodiscard]] std::size_t peak_node_count() const { return peak_nodes_; }
  [[nodiscard]] std::size_t peak_class_count() const { return peak_classes_; }
  void reset_peaks();

  /// Canonical class ids in ascending order.
  [[nodiscard]] std::vector<Id> class_ids() const;
  [[nodiscard]] bool is_class(Id id) const { return id < classes_.size() && classes_[id] != nullptr; }
  /// Canonical e-nodes of a class, sorted by enode_less after rebuild.
  [[nodiscard]] const std::vector<ENode> &nodes(Id eclass) const;
  /// Upper bound (exclusive) on every id handed out so far.
  [[nodiscard]] std::size_t id_bound() const { return node_of_.size(); }

  /// Keeps only the nodes for which `keep(class, node)` is true (classes never
  /// become empty: the caller must retain at least one node per class), then
  /// drops classes unreachable from the roots. Explanation history is kept.
  /// Returns the number of nodes removed.
  std::size_t retain(const std::function<bool(Id, const ENode &)> &keep);

  /// Removes classes no longer reachable from the roots.
  std::size_t sweep_unreachable();

  /// Proof of s = t as a flat sequence of rule applications.
  /// Throws NotEquivalent if the terms are not in the same class.
  Explanation explain(const Term &s, const Term &t);
  /// Guard against pathological explanation blow-up.
  void set_explanation_step_limit(std::size_t limit) { step_limit_ = limit; }

  /// Concrete term recorded for an e-node id.
  [[nodiscard]] Term term_of(Id node_id) const;

  /// Registers a rule so justifications can name it and rule edges can be
  /// instantiated. Returns an index stable for this graph.
  int register_rule(const RewriteRule &rule);
  [[nodiscard]] const RewriteRule &registered_rule(int index) const { return rules_.at(static_cast<std::size_t>(index)); }

  /// Instantiates `p` with the (variable -> id) substitution. Returns the
  /// e-node id of the concrete instance, not its canonical class.
  Id add_instantiation(const Pattern &p, std::span<const std::pair<Symbol, Id>> subst);

  [[nodiscard]] const Signature &signature() const { return signature_; }

  /// Verifies hashcons, class table and congruence invariants. Returns a
  /// description of the first violation, or an empty string.
  [[nodiscard]] std::string check_invariants() const;

 private:
  struct EClass {
    std::vector<ENode> nodes;
    std::vector<Id> parents;  // e-node ids whose children include this class
  };

  struct Link {
    Id next = kNoId;
    std::int32_t rule = -1;  // -1: congruence
    bool forward = true;
    std::uint32_t subst_begin = 0;
    std::uint32_t subst_len = 0;
  };

  // restore=false never re-adds a pruned node; used while explaining.
  Id add_exact(const Term &t, bool restore = true);
  Id add_exact_node(ENode exact, bool restore = true);
  // Class of a term through current or historical nodes, without inserting.
  [[nodiscard]] std::optional<std::pair<std::optional<Id>, Id>> locate(const Term &t) const;
  Id new_id(const ENode &exact);
  [[nodiscard]] ENode canonicalize(const ENode &n) const;
  EClass &class_of(Id canonical);
  void note_peaks();

  void link(Id a, Id b, const Justification &why);
  void reroot(Id x);
  void explain_ids(Id a, Id b, const Path &path, Explanation &out) const;

  void match_rec(const Pattern &p, Id eclass, std::vector<Id> &bind, const std::vector<Symbol> &vars,
                 std::vector<std::vector<Id>> &out) const;
  void match_node_rec(const Pattern &p, const ENode &node, std::size_t child, std::vector<Id> &bind,
                      const std::vector<Symbol> &vars, std::vector<std::vector<Id>> &out) const;

  void rebuild_indexes();

  Signature signature_;
  std::vector<ENode> node_of_;  // exact node per id
  mutable std::vector<Id> uf_;
  std::vector<Link> links_;
  std::vector<std::pair<Symbol, Id>> subst_pool_;
  std::vector<std::unique_ptr<EClass>> classes_;
  std::unordered_map<ENode, Id, ENodeHash> hashcons_;  // canonical node -> e-node id
  std::unordered_map<ENode, Id, ENodeHash> memo_;      // exact node -> e-node id (history)
  std::vector<Id> pending_;
  std::vector<Id> dirty_;
  std::vector<Id> roots_;
  std::vector<RewriteRule> rules_;
  std::unordered_map<std::string, int> rule_index_;
  std::size_t node_count_ = 0;
  std::size_t class_count_ = 0;
  std::size_t peak_nodes_ = 0;
  std::size_t peak_classes_ = 0;
  std::size_t step_limit_ = 1'000'000;
};

/// Match-all-then-apply-all saturation for up to `iter_limit` iterations.
/// Caps are checked at iteration boundaries only.
SaturationReport apply_rules(EGraph &graph, std::span<const RewriteRule> rules, int iter_limit,
                             const SaturationCaps &caps = {});

/// Checks that every step of an explanation replays: the named rule matches
/// the term at the recorded path with the recorded substitution and yields the
/// next term. Throws InvalidExplanation describing the first bad step.
void replay_explanation(const Explanation &e, std::span<const RewriteRule> rules);

}  // namespace stratsat
