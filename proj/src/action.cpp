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

#include "stratsat/action.hpp"

#include "stratsat/sexpr.hpp"

namespace stratsat {

std::string_view to_string(BudgetMode m) {
  switch (m) {
    case BudgetMode::Full: return "full";
    case BudgetMode::Reduced: return "reduced";
    case BudgetMode::Minimal: return "minimal";
  }
  return "?";
}

std::optional<BudgetMode> parse_budget_mode(std::string_view text) {
  for (auto m : {BudgetMode::Full, BudgetMode::Reduced, BudgetMode::Minimal}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void bad(const std::string &msg, const SExpr &e) { throw Error(ErrorKind::ParseError, msg, e.where); }

void arity(const SExpr &e, std::size_t n, std::string_view shape) {
  if (e.items.size() != n) bad("expected " + std::string(shape), e);
}

int record_id(const SExpr &e) {
  long long v = expect_int(e, "record id");
  if (v < 0 || v > 1'000'000) bad("record id out of range", e);
  return static_cast<int>(v);
}

Knob parse_knob(const SExpr &e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_atom()) bad("expected a knob form", e);
  const auto &head = e.items[0].text;
  Knob k;
  auto target = [&] { return expect_atom(e.items[1], "knob target"); };
  if (head == "iter" || head == "rounds") {
    arity(e, 3, "(" + head + " <node> n)");
    k.kind = head == "iter" ? Knob::Kind::Iter : Knob::Kind::Rounds;
    k.target = target();
    k.value = static_cast<double>(expect_int(e.items[2], head));
  } else if (head == "theta" || head == "penalty") {
    arity(e, 3, "(" + head + " <node> x)");
    k.kind = head == "theta" ? Knob::Kind::Theta : Knob::Kind::Penalty;
    k.target = target();
    k.value = expect_number(e.items[2], head);
  } else if (head == "swap-tag") {
    arity(e, 4, "(swap-tag <ruleset> <old> <new>)");
    k.kind = Knob::Kind::SwapTag;
    k.target = target();
    k.tag = expect_atom(e.items[2], "tag");
    k.new_tag = expect_atom(e.items[3], "tag");
  } else if (head == "add-tag" || head == "drop-tag") {
    arity(e, 3, "(" + head + " <ruleset> <tag>)");
    k.kind = head == "add-tag" ? Knob::Kind::AddTag : Knob::Kind::DropTag;
    k.target = target();
    k.tag = expect_atom(e.items[2], "tag");
  } else if (head == "hint") {
    arity(e, 3, "(hint <node> (pref P prune Q))");
    k.kind = Knob::Kind::Hint;
    k.target = target();
    k.hint = hint_from_sexpr(e.items[2]);
  } else {
    bad("unknown knob '" + head + "'", e);
  }
  return k;
}

}  // namespace

StrategistAction action_from_sexpr(const SExpr &e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_atom()) bad("expected an action form", e);
  const auto &head = e.items[0].text;
  if (head == "propose") {
    arity(e, 1, "(propose)");
    return ProposeNew{};
  }
  if (head == "partition-advice") {
    arity(e, 1, "(partition-advice)");
    return RequestPartitionAdvice{};
  }
  if (head == "stop") {
    arity(e, 1, "(stop)");
    return Stop{};
  }
  if (head == "request-hints") {
    arity(e, 2, "(request-hints <context>)");
    return RequestHints{expect_text(e.items[1], "hint context")};
  }
  if (head == "evaluate") {
    arity(e, 3, "(evaluate <id> full|reduced|minimal)");
    auto mode = parse_budget_mode(expect_atom(e.items[2], "budget mode"));
    if (!mode) bad("budget mode must be full, reduced or minimal", e.items[2]);
    return Evaluate{record_id(e.items[1]), *mode};
  }
  if (head == "tune") {
    if (e.items.size() < 3) bad("expected (tune <id> <knob>+)", e);
    Tune t{record_id(e.items[1]), {}};
    for (std::size_t i = 2; i < e.items.size(); ++i) t.knobs.push_back(parse_knob(e.items[i]));
    return t;
  }
  bad("unknown action '" + head + "'", e);
}

StrategistAction parse_action(std::string_view text) { return action_from_sexpr(parse_sexpr(text)); }

std::string to_string(const Knob &k) {
  switch (k.kind) {
    case Knob::Kind::Iter: return "(iter " + k.target + " " + format_number(k.value) + ")";
    case Knob::Kind::Rounds: return "(rounds " + k.target + " " + format_number(k.value) + ")";
    case Knob::Kind::Theta: return "(theta " + k.target + " " + format_number(k.value) + ")";
    case Knob::Kind::Penalty: return "(penalty " + k.target + " " + format_number(k.value) + ")";
    case Knob::Kind::SwapTag: return "(swap-tag " + k.target + " " + k.tag + " " + k.new_tag + ")";
    case Knob::Kind::AddTag: return "(add-tag " + k.target + " " + k.tag + ")";
    case Knob::Kind::DropTag: return "(drop-tag " + k.target + " " + k.tag + ")";
    case Knob::Kind::Hint: return "(hint " + k.target + " " + to_string(*k.hint) + ")";
  }
  return "?";
}

std::string to_string(const StrategistAction &a) {
  struct Printer {
    std::string operator()(const ProposeNew &) const { return "(propose)"; }
    std::string operator()(const RequestPartitionAdvice &) const { return "(partition-advice)"; }
    std::string operator()(const Stop &) const { return "(stop)"; }
    std::string operator()(const RequestHints &r) const {
      return "(request-hints " + to_string(SExpr::string(r.context)) + ")";
    }
    std::string operator()(const Evaluate &e) const {
      return "(evaluate " + std::to_string(e.record) + " " + std::string(to_string(e.mode)) + ")";
    }
    std::string operator()(const Tune &t) const {
      std::string out = "(tune " + std::to_string(t.record);
      for (const auto &k : t.knobs) out += " " + to_string(k);
      return out + ")";
    }
  };
  return std::visit(Printer{}, a);
}

}  // namespace stratsat
