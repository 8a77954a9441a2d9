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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stratsat/rule.hpp"
#include "stratsat/term.hpp"

namespace stratsat {

/// Rules, semantic tags, constants and operator arities of one domain.
/// Immutable after load.
struct Vocabulary {
  std::vector<RewriteRule> rules;
  std::vector<TagId> tags;  // first-appearance order
  std::set<std::string> constants;
  std::map<std::string, int> operators;  // symbol -> arity (including inferred ones)

  [[nodiscard]] bool has_tag(std::string_view tag) const;
  [[nodiscard]] const RewriteRule *rule(std::string_view name) const;
  /// Tag of a named rule; throws InvalidArgument for unknown rules.
  [[nodiscard]] const TagId &tag_of(std::string_view rule_name) const;
  [[nodiscard]] Signature signature() const;
  [[nodiscard]] std::string to_text() const;
};

/// Parses `(const s)`, `(op s n)`, `(tag t)` and `(rule name lhs rhs :tag t)`.
/// Symbols used in rules without an `op` declaration get the arity of their
/// first use. An unbound right-hand variable `?c` is read as the constant `c`
/// when `c` is declared; otherwise the rule is rejected as generative.
/// Rules without `:tag` take their tag from `tag_table` when it names them.
Vocabulary load_vocabulary(std::string_view text, const std::map<std::string, TagId> &tag_table = {});

/// Names of rules in `text` that carry no `:tag`, in file order.
std::vector<std::string> untagged_rules(std::string_view text);

/// `(tag <rule> <tag>)` forms. Throws ParseError.
std::map<std::string, TagId> parse_tag_table(std::string_view text);

/// Rules whose tag is listed, in vocabulary order. Throws UnknownTag.
std::vector<RewriteRule> rules_with_tags(const Vocabulary &v, const std::vector<TagId> &tags);

}  // namespace stratsat
