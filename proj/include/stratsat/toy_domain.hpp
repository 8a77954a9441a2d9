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

#include <cstdint>
#include <string>
#include <vector>

#include "stratsat/extract.hpp"
#include "stratsat/strategy.hpp"
#include "stratsat/vocab.hpp"

namespace stratsat::toy {

/// Version tag of the shipped rule list; bump when rules change.
inline constexpr std::string_view kVersion = "v1";

std::string_view vocabulary_text();
std::string_view cost_text();
std::string_view reference_strategy_text();

const Vocabulary &vocabulary();
const CostModel &cost_model();

struct ToyCase {
  std::string name;
  int lanes = 2;
  Term root;
};

/// Deterministic sum-of-products cases. Leaves are drawn from a small pool so
/// lanes share subterms; the operands of some sums are swapped.
std::vector<ToyCase> generate_cases(std::uint64_t seed, int count, int lanes);

/// Cases shipped under data/toy/v1/cases.
std::vector<ToyCase> shipped_cases();

Strategy reference_strategy();

/// Per-lane forms of a case built directly (not by rewriting): the scalar
/// input, the lifted vecadd/vecmul form and the fused vecmac form.
struct LaneForms {
  Term scalar;
  Term lifted;
  Term fused;
};

/// Only defined for cases whose lanes are all (+ (* p q) r) up to operand order.
LaneForms lane_forms(const Term &scalar_case);

}  // namespace stratsat::toy
