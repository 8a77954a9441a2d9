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
#include <string>
#include <vector>

#include "stratsat/egraph.hpp"
#include "stratsat/vocab.hpp"

namespace stratsat {

struct Gain {
  double value = 0.0;
  bool degenerate = false;  // c_after == 0
};

/// g = 1 - after / before. Throws NonPositiveBaseline when before <= 0.
Gain gain(double before, double after);

using TagChain = std::vector<TagId>;

struct Motif {
  TagChain chain;
  Path context;  // path prefix shared by the source region's steps
  std::size_t support = 0;
  std::vector<double> gains;

  [[nodiscard]] double mean_gain() const;
  /// mean_gain * log2(1 + support)
  [[nodiscard]] double utility() const;

  friend bool operator==(const Motif &, const Motif &) = default;
};

std::string render_chain(const TagChain &chain);

/// Splits the explanation's rule steps into maximal consecutive runs whose
/// paths are prefix-comparable, maps each run through the rule-to-tag
/// function, collapses adjacent duplicate tags and cuts chains longer than
/// `max_chain_len` into overlapping windows. Throws InvalidExplanation if the
/// explanation does not replay.
std::vector<Motif> extract_motifs(const Explanation &e, const Vocabulary &v, std::size_t max_chain_len = 4);

inline constexpr std::size_t kDefaultCacheCapacity = 64;
inline constexpr std::size_t kDefaultTopMotifs = 8;

/// Bounded motif store keyed by tag chain. Single writer.
class MotifCache {
 public:
  explicit MotifCache(std::size_t capacity = kDefaultCacheCapacity) : capacity_(capacity) {}

  /// Merges the run's motifs (each chain counted once per call) and evicts the
  /// lowest-utility entries beyond capacity; among equal utilities the
  /// lexicographically greater chain goes first. Throws NonPositiveGain.
  void update(const std::vector<Motif> &motifs, const Gain &run_gain);

  /// The n highest-utility entries; equal utilities in chain order.
  [[nodiscard]] std::vector<Motif> top(std::size_t n) const;

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] std::size_t updates() const { return updates_; }
  [[nodiscard]] const std::map<TagChain, Motif> &entries() const { return entries_; }

  /// One `(motif (chain ...) (context ...) (gains ...))` form per line.
  [[nodiscard]] std::string to_text() const;
  static MotifCache from_text(std::string_view text, std::size_t capacity = kDefaultCacheCapacity);

  friend bool operator==(const MotifCache &, const MotifCache &) = default;

 private:
  void evict();

  std::size_t capacity_;
  std::size_t updates_ = 0;
  std::map<TagChain, Motif> entries_;
};

std::vector<Motif> top_motifs(const MotifCache &cache, std::size_t n);

/// "a -> b  utility=... support=... mean_gain=..."
std::string render_motif(const Motif &m);

}  // namespace stratsat
