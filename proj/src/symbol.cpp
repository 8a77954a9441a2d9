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

#include "stratsat/symbol.hpp"

#include <array>
#include <atomic>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace stratsat {
namespace {

// Names are published into a fixed slot table so that name() never locks.
constexpr std::size_t kMaxSymbols = std::size_t{1} << 20;

class Interner {
 public:
  Interner() : slots_(new std::atomic<const std::string *>[kMaxSymbols]) {
    auto *empty = new std::string();
    slots_[0].store(empty, std::memory_order_release);
    index_.emplace(std::string_view(*empty), 0);
    size_ = 1;
  }

  std::uint32_t intern(std::string_view name) {
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    if (size_ == kMaxSymbols) throw std::length_error("symbol table full");
    auto *stored = new std::string(name);
    auto id = static_cast<std::uint32_t>(size_++);
    slots_[id].store(stored, std::memory_order_release);
    index_.emplace(std::string_view(*stored), id);
    return id;
  }

  const std::string &name(std::uint32_t id) const { return *slots_[id].load(std::memory_order_acquire); }

 private:
  std::unique_ptr<std::atomic<const std::string *>[]> slots_;
  std::mutex mutex_;
  std::unordered_map<std::string_view, std::uint32_t> index_;
  std::size_t size_ = 0;
};

Interner &interner() {
  static Interner instance;
  return instance;
}

}  // namespace

Symbol::Symbol(std::string_view name) : id_(interner().intern(name)) {}

const std::string &Symbol::name() const { return interner().name(id_); }

}  // namespace stratsat
