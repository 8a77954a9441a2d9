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

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratsat {

enum class ErrorKind {
  ParseError,
  GrammarViolation,
  UnknownSymbol,
  ArityMismatch,
  DuplicateRule,
  UnknownArity,
  UntaggedRule,
  GenerativeRule,
  UnknownTag,
  InvalidId,
  NoFiniteCost,
  NotEquivalent,
  InvalidExplanation,
  ExplanationTooLarge,
  NonPositiveBaseline,
  NonPositiveGain,
  NonPositiveValue,
  CaseMismatch,
  IncompleteAssignment,
  ValidationFailed,
  NoEvaluatedStrategy,
  ProviderFailure,
  InvalidProposal,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Source position inside a text input, 1-based. Zero means unknown.
struct Location {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message, Location where = {})
      : std::runtime_error(format(kind, message, where)), kind_(kind), where_(where) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] Location where() const noexcept { return where_; }

 private:
  static std::string format(ErrorKind kind, const std::string &message, Location where);

  ErrorKind kind_;
  Location where_;
};

}  // namespace stratsat
