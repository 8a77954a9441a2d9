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

#include "stratsat/strategy.hpp"

#include <algorithm>

#include "stratsat/vocab.hpp"

namespace stratsat {

const RulesetDecl *Strategy::ruleset(std::string_view name) const {
  auto it = std::find_if(rulesets.begin(), rulesets.end(), [&](const RulesetDecl &r) { return r.name == name; });
  return it == rulesets.end() ? nullptr : &*it;
}

std::string_view to_string(SimplifyMode m) { return m == SimplifyMode::Prune ? "prune" : "extract-rebuild"; }

std::string child_id(const std::string &parent, std::size_t index) { return parent + "." + std::to_string(index); }

namespace {

[[noreturn]] void violation(const std::string &msg, Location where) {
  throw Error(ErrorKind::GrammarViolation, msg, where);
}

const SExpr &form(const SExpr &e, std::string_view head, std::size_t min_items) {
  if (!e.is_form(head)) throw Error(ErrorKind::ParseError, "expected (" + std::string(head) + " ...)", e.where);
  if (e.items.size() < min_items) violation("(" + std::string(head) + " ...) is missing arguments", e.where);
  return e;
}

int positive_int(const SExpr &e, std::string_view what) {
  long long v = expect_int(e, what);
  if (v < 1) violation(std::string(what) + " must be >= 1, got " + std::to_string(v), e.where);
  if (v > 1'000'000) violation(std::string(what) + " is unreasonably large", e.where);
  return static_cast<int>(v);
}

double fraction(const SExpr &e) {
  double v = expect_number(e, "theta");
  if (!(v >= 0.0 && v <= 1.0)) violation("theta must lie in [0, 1]", e.where);
  return v;
}

HintPair parse_hint(const SExpr &e) {
  if (!e.is_form("pref") || e.items.size() != 4 || !e.items[2].is_atom() || e.items[2].text != "prune") {
    throw Error(ErrorKind::ParseError, "expected (pref <pattern> prune <pattern>)", e.where);
  }
  HintPair h{pattern_from_sexpr(e.items[1]), pattern_from_sexpr(e.items[3])};
  if (h.preferred == h.pruned) violation("hint prefers and prunes the same pattern", e.where);
  return h;
}

FlowNode parse_flow(const SExpr &e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_atom()) {
    throw Error(ErrorKind::ParseError, "expected a flow node", e.where);
  }
  const auto &head = e.items[0].text;
  FlowNode out;
  out.where = e.where;
  if (head == "phase") {
    if (e.items.size() != 4) violation("expected (phase <name> <ruleset> <iter-limit>)", e.where);
    out.node = PhaseNode{expect_atom(e.items[1], "phase name"), expect_atom(e.items[2], "ruleset name"),
                         positive_int(e.items[3], "iteration limit")};
  } else if (head == "sequence") {
    if (e.items.size() < 2) violation("sequence needs at least one child", e.where);
    SequenceNode seq;
    for (std::size_t i = 1; i < e.items.size(); ++i) seq.children.push_back(parse_flow(e.items[i]));
    out.node = std::move(seq);
  } else if (head == "repeat") {
    if (e.items.size() != 3) violation("expected (repeat <node> <rounds>)", e.where);
    out.node = RepeatNode{parse_flow(e.items[1]), positive_int(e.items[2], "rounds")};
  } else if (head == "heuristic-simplify") {
    SimplifyNode s;
    if (e.items.size() != 2 && e.items.size() != 4) violation("expected (heuristic-simplify <theta> [:mode m])", e.where);
    s.theta = fraction(e.items[1]);
    if (e.items.size() == 4) {
      if (expect_atom(e.items[2], "option") != ":mode") violation("unknown heuristic-simplify option", e.items[2].where);
      const auto &m = expect_atom(e.items[3], "mode");
      if (m == "prune") {
        s.mode = SimplifyMode::Prune;
      } else if (m == "extract-rebuild") {
        s.mode = SimplifyMode::ExtractRebuild;
      } else {
        violation("mode must be prune or extract-rebuild", e.items[3].where);
      }
    }
    out.node = std::move(s);
  } else if (head == "hint-simplify") {
    if (e.items.size() < 2) violation("expected (hint-simplify <theta> (pref ...)*)", e.where);
    SimplifyNode s;
    s.hint_guided = true;
    s.theta = fraction(e.items[1]);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      const auto &item = e.items[i];
      if (item.is_atom() && item.text == ":penalty") {
        if (i + 1 >= e.items.size()) violation(":penalty needs a value", item.where);
        s.penalty = expect_number(e.items[++i], "penalty");
        if (!(s.penalty >= 0.0 && s.penalty <= kMaxPenalty)) {
          violation("penalty must lie in [0, " + format_number(kMaxPenalty) + "]", e.items[i].where);
        }
      } else if (item.is_form("pref")) {
        s.hints.push_back(parse_hint(item));
      } else if (item.is_list()) {
        for (const auto &h : item.items) s.hints.push_back(parse_hint(h));
      } else {
        throw Error(ErrorKind::ParseError, "expected a hint pair", item.where);
      }
    }
    out.node = std::move(s);
  } else {
    throw Error(ErrorKind::ParseError, "unknown flow node '" + head + "'", e.where);
  }
  return out;
}

}  // namespace

Strategy strategy_from_sexpr(const SExpr &e) {
  form(e, "strategy", 4);
  if (e.items.size() != 4) violation("expected (strategy <name> (rulesets ...) (flow ...))", e.where);
  Strategy s;
  s.name = expect_atom(e.items[1], "strategy name");
  const auto &rs = form(e.items[2], "rulesets", 2);
  for (std::size_t i = 1; i < rs.items.size(); ++i) {
    const auto &r = form(rs.items[i], "ruleset", 3);
    if (r.items.size() != 3) violation("expected (ruleset <name> (tags ...))", r.where);
    RulesetDecl decl{expect_atom(r.items[1], "ruleset name"), {}};
    const auto &tags = form(r.items[2], "tags", 2);
    for (std::size_t j = 1; j < tags.items.size(); ++j) {
      auto tag = expect_atom(tags.items[j], "tag");
      if (std::find(decl.tags.begin(), decl.tags.end(), tag) != decl.tags.end()) {
        violation("tag '" + tag + "' listed twice", tags.items[j].where);
      }
      decl.tags.push_back(std::move(tag));
    }
    if (s.ruleset(decl.name)) violation("ruleset '" + decl.name + "' declared twice", r.where);
    s.rulesets.push_back(std::move(decl));
  }
  const auto &flow = form(e.items[3], "flow", 2);
  if (flow.items.size() != 2) violation("flow holds exactly one node", flow.where);
  s.flow = parse_flow(flow.items[1]);
  return s;
}

Strategy parse_strategy(std::string_view text) { return strategy_from_sexpr(parse_sexpr(text)); }

HintPair hint_from_sexpr(const SExpr &e) { return parse_hint(e); }

namespace {

std::string print_hint(const HintPair &h) {
  return "(pref " + to_string(h.preferred) + " prune " + to_string(h.pruned) + ")";
}

std::string print_leaf(const FlowNode &n) {
  if (const auto *p = std::get_if<PhaseNode>(&n.node)) {
    return "(phase " + p->name + " " + p->ruleset + " " + std::to_string(p->iter_limit) + ")";
  }
  const auto &s = std::get<SimplifyNode>(n.node);
  if (!s.hint_guided) {
    std::string out = "(heuristic-simplify " + format_number(s.theta);
    if (s.mode == SimplifyMode::ExtractRebuild) out += " :mode extract-rebuild";
    return out + ")";
  }
  std::string out = "(hint-simplify " + format_number(s.theta);
  if (s.penalty != kDefaultPenalty) out += " :penalty " + format_number(s.penalty);
  for (const auto &h : s.hints) out += " " + print_hint(h);
  return out + ")";
}

}  // namespace

std::string to_string(const HintPair &h) { return print_hint(h); }

namespace {

void print_node(const FlowNode &n, int indent, std::string &out) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (const auto *seq = std::get_if<SequenceNode>(&n.node)) {
    out += pad + "(sequence";
    for (const auto &c : seq->children) {
      out += '\n';
      print_node(c, indent + 2, out);
    }
    out += ')';
  } else if (const auto *rep = std::get_if<RepeatNode>(&n.node)) {
    out += pad + "(repeat\n";
    print_node(*rep->body, indent + 2, out);
    out += "\n" + pad + "  " + std::to_string(rep->rounds) + ")";
  } else {
    out += pad + print_leaf(n);
  }
}

}  // namespace

std::string print_flow(const FlowNode &n) {
  if (const auto *seq = std::get_if<SequenceNode>(&n.node)) {
    std::string out = "(sequence";
    for (const auto &c : seq->children) out += " " + print_flow(c);
    return out + ")";
  }
  if (const auto *rep = std::get_if<RepeatNode>(&n.node)) {
    return "(repeat " + print_flow(*rep->body) + " " + std::to_string(rep->rounds) + ")";
  }
  return print_leaf(n);
}

std::string print_strategy(const Strategy &s) {
  std::string out = "(strategy " + s.name + "\n  (rulesets";
  for (const auto &r : s.rulesets) {
    out += "\n    (ruleset " + r.name + " (tags";
    for (const auto &t : r.tags) out += " " + t;
    out += "))";
  }
  out += ")\n  (flow\n";
  print_node(s.flow, 4, out);
  out += "))\n";
  return out;
}

std::string to_string(const Diagnostic &d) {
  std::string out = d.severity == Diagnostic::Severity::Error ? "error" : "warning";
  if (d.where.line > 0) out += " at " + std::to_string(d.where.line) + ":" + std::to_string(d.where.column);
  if (!d.node_id.empty()) out += " [node " + d.node_id + "]";
  return out + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic> &diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic &d) { return d.severity == Diagnostic::Severity::Error; });
}

namespace {

bool contains_simplify(const FlowNode &n) {
  if (std::holds_alternative<SimplifyNode>(n.node)) return true;
  if (const auto *seq = std::get_if<SequenceNode>(&n.node)) {
    return std::any_of(seq->children.begin(), seq->children.end(), contains_simplify);
  }
  if (const auto *rep = std::get_if<RepeatNode>(&n.node)) return contains_simplify(*rep->body);
  return false;
}

class Validator {
 public:
  Validator(const Strategy &s, const Vocabulary &v) : s_(s), v_(v) {}

  std::vector<Diagnostic> run() {
    for (const auto &r : s_.rulesets) {
      if (r.tags.empty()) error("", {}, "ruleset '" + r.name + "' has no tags");
      for (const auto &t : r.tags) {
        if (!v_.has_tag(t)) error("", {}, "ruleset '" + r.name + "' uses unknown tag '" + t + "'");
      }
    }
    visit(s_.flow, "0");
    return std::move(out_);
  }

 private:
  void error(const std::string &id, Location where, std::string msg) {
    out_.push_back({Diagnostic::Severity::Error, id, where, std::move(msg)});
  }

  void check_pattern(const Pattern &p, const std::string &id, Location where) {
    if (p.is_var) return;
    auto it = v_.operators.find(p.sym.name());
    if (it == v_.operators.end()) {
      error(id, where, "hint pattern uses unknown symbol '" + p.sym.name() + "'");
      return;
    }
    if (it->second != static_cast<int>(p.children.size())) {
      error(id, where, "hint pattern applies '" + p.sym.name() + "' to " + std::to_string(p.children.size()) +
                           " arguments; arity is " + std::to_string(it->second));
      return;
    }
    for (const auto &c : p.children) check_pattern(c, id, where);
  }

  void visit(const FlowNode &n, const std::string &id) {
    if (const auto *p = std::get_if<PhaseNode>(&n.node)) {
      if (!s_.ruleset(p->ruleset)) error(id, n.where, "phase '" + p->name + "' uses undeclared ruleset '" + p->ruleset + "'");
      if (p->iter_limit < 1) error(id, n.where, "iteration limit must be >= 1");
    } else if (const auto *seq = std::get_if<SequenceNode>(&n.node)) {
      if (seq->children.empty()) error(id, n.where, "empty sequence");
      for (std::size_t i = 0; i < seq->children.size(); ++i) visit(seq->children[i], child_id(id, i));
    } else if (const auto *rep = std::get_if<RepeatNode>(&n.node)) {
      if (rep->rounds < 1) error(id, n.where, "rounds must be >= 1");
      if (!contains_simplify(*rep->body)) {
        out_.push_back({Diagnostic::Severity::Warning, id, n.where, "repeat body has no simplify step"});
      }
      visit(*rep->body, child_id(id, 0));
    } else {
      const auto &s = std::get<SimplifyNode>(n.node);
      if (!(s.theta >= 0.0 && s.theta <= 1.0)) error(id, n.where, "theta outside [0, 1]");
      if (!(s.penalty >= 0.0 && s.penalty <= kMaxPenalty)) error(id, n.where, "penalty out of range");
      for (const auto &h : s.hints) {
        check_pattern(h.preferred, id, n.where);
        check_pattern(h.pruned, id, n.where);
        if (h.preferred == h.pruned) error(id, n.where, "hint prefers and prunes the same pattern");
      }
    }
  }

  const Strategy &s_;
  const Vocabulary &v_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_strategy(const Strategy &s, const Vocabulary &v) { return Validator(s, v).run(); }

std::size_t flow_depth(const FlowNode &n) {
  std::size_t d = 0;
  if (const auto *seq = std::get_if<SequenceNode>(&n.node)) {
    for (const auto &c : seq->children) d = std::max(d, flow_depth(c));
  } else if (const auto *rep = std::get_if<RepeatNode>(&n.node)) {
    d = flow_depth(*rep->body);
  }
  return d + 1;
}

std::size_t flow_size(const FlowNode &n) {
  std::size_t total = 1;
  if (const auto *seq = std::get_if<SequenceNode>(&n.node)) {
    for (const auto &c : seq->children) total += flow_size(c);
  } else if (const auto *rep = std::get_if<RepeatNode>(&n.node)) {
    total += flow_size(*rep->body);
  }
  return total;
}

}  // namespace stratsat
