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

#include "stratsat/error.hpp"

namespace stratsat {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::GrammarViolation: return "GrammarViolation";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::DuplicateRule: return "DuplicateRule";
    case ErrorKind::UnknownArity: return "UnknownArity";
    case ErrorKind::UntaggedRule: return "UntaggedRule";
    case ErrorKind::GenerativeRule: return "GenerativeRule";
    case ErrorKind::UnknownTag: return "UnknownTag";
    case ErrorKind::InvalidId: return "InvalidId";
    case ErrorKind::NoFiniteCost: return "NoFiniteCost";
    case ErrorKind::NotEquivalent: return "NotEquivalent";
    case ErrorKind::InvalidExplanation: return "InvalidExplanation";
    case ErrorKind::ExplanationTooLarge: return "ExplanationTooLarge";
    case ErrorKind::NonPositiveBaseline: return "NonPositiveBaseline";
    case ErrorKind::NonPositiveGain: return "NonPositiveGain";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::NoEvaluatedStrategy: return "NoEvaluatedStrategy";
    case ErrorKind::ProviderFailure: return "ProviderFailure";
    case ErrorKind::InvalidProposal: return "InvalidProposal";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::string Error::format(ErrorKind kind, const std::string &message, Location where) {
  std::string out(to_string(kind));
  if (where.line > 0) {
    out += " at " + std::to_string(where.line) + ":" + std::to_string(where.column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace stratsat
