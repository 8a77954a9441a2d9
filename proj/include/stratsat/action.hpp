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

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stratsat/strategy.hpp"

namespace stratsat {

enum class BudgetMode { Full, Reduced, Minimal };
std::string_view to_string(BudgetMode m);
std::optional<BudgetMode> parse_budget_mode(std::string_view text);

/// One parameter edit applied by a Tune action. Flow-node targets use the
/// preorder ids of `child_id`; tag edits target a ruleset by name.
struct Knob {
  enum class Kind { Iter, Rounds, Theta, Penalty, SwapTag, AddTag, DropTag, Hint };
  Kind kind = Kind::Iter;
  std::string target;
  double value = 0.0;
  std::string tag;      // add/drop tag, or the tag swapped out
  std::string new_tag;  // swap-tag only
  std::optional<HintPair> hint;

  friend bool operator==(const Knob &, const Knob &) = default;
};

struct ProposeNew {
  friend bool operator==(const ProposeNew &, const ProposeNew &) = default;
};
struct Tune {
  int record = -1;
  std::vector<Knob> knobs;
  friend bool operator==(const Tune &, const Tune &) = default;
};
struct RequestPartitionAdvice {
  friend bool operator==(const RequestPartitionAdvice &, const RequestPartitionAdvice &) = default;
};
struct RequestHints {
  std::string context;
  friend bool operator==(const RequestHints &, const RequestHints &) = default;
};
struct Evaluate {
  int record = -1;
  BudgetMode mode = BudgetMode::Full;
  friend bool operator==(const Evaluate &, const Evaluate &) = default;
};
struct Stop {
  friend bool operator==(const Stop &, const Stop &) = default;
};

using StrategistAction = std::variant<ProposeNew, Tune, RequestPartitionAdvice, RequestHints, Evaluate, Stop>;

/// `(propose)`, `(tune <id> <knob>+)`, `(partition-advice)`,
/// `(request-hints <context>)`, `(evaluate <id> full|reduced|minimal)` or
/// `(stop)`. Knobs: `(iter <node> n)`, `(rounds <node> n)`,
/// `(theta <node> x)`, `(penalty <node> x)`, `(swap-tag <ruleset> old new)`,
/// `(add-tag <ruleset> t)`, `(drop-tag <ruleset> t)` and
/// `(hint <node> (pref P prune Q))`. Throws ParseError.
StrategistAction parse_action(std::string_view text);
StrategistAction action_from_sexpr(const SExpr &e);
std::string to_string(const StrategistAction &a);
std::string to_string(const Knob &k);

}  // namespace stratsat
