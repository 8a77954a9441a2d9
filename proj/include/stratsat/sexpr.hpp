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
#include <vector>

#include "stratsat/error.hpp"

namespace stratsat {

/// Generic s-expression node shared by every text format in the toolkit.
struct SExpr {
  enum class Kind { Atom, String, List };

  Kind kind = Kind::Atom;
  std::string text;  // atom or string payload
  std::vector<SExpr> items;
  Location where;

  [[nodiscard]] bool is_atom() const { return kind == Kind::Atom; }
  [[nodiscard]] bool is_list() const { return kind == Kind::List; }
  [[nodiscard]] bool is_string() const { return kind == Kind::String; }

  /// True when this is a list whose first item is the atom `head`.
  [[nodiscard]] bool is_form(std::string_view head) const;

  static SExpr atom(std::string text) { return {Kind::Atom, std::move(text), {}, {}}; }
  static SExpr string(std::string text) { return {Kind::String, std::move(text), {}, {}}; }
  static SExpr list(std::vector<SExpr> items) { return {Kind::List, {}, std::move(items), {}}; }
};

/// Parses every top-level form in `text`. `;` starts a comment that runs to end of line.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// Parses exactly one form; trailing content is a ParseError.
SExpr parse_sexpr(std::string_view text);

std::string to_string(const SExpr &e);

// Field accessors that raise ParseError with the node location.
const std::string &expect_atom(const SExpr &e, std::string_view what);
const SExpr &expect_list(const SExpr &e, std::string_view what);
long long expect_int(const SExpr &e, std::string_view what);
double expect_number(const SExpr &e, std::string_view what);
std::string expect_text(const SExpr &e, std::string_view what);  // atom or string

std::optional<long long> parse_int(std::string_view text);
std::optional<double> parse_number(std::string_view text);

/// Shortest round-tripping decimal rendering.
std::string format_number(double value);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

}  // namespace stratsat
