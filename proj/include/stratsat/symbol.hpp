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
#include <functional>
#include <string>
#include <string_view>

namespace stratsat {

/// Interned operator or leaf name. Ids are process-local and never used for
/// ordering; compare names where order matters.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view name);

  [[nodiscard]] const std::string &name() const;
  [[nodiscard]] std::uint32_t id() const noexcept { return id_; }

  friend bool operator==(Symbol a, Symbol b) noexcept { return a.id_ == b.id_; }
  friend bool operator!=(Symbol a, Symbol b) noexcept { return a.id_ != b.id_; }

 private:
  std::uint32_t id_ = 0;
};

/// Lexicographic comparison by name.
inline bool name_less(Symbol a, Symbol b) { return a != b && a.name() < b.name(); }

}  // namespace stratsat

template <>
struct std::hash<stratsat::Symbol> {
  std::size_t operator()(stratsat::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
