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

#include "stratsat/motif.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace stratsat {

Gain gain(double before, double after) {
  if (!(before > 0.0)) throw Error(ErrorKind::NonPositiveBaseline, "baseline cost must be > 0");
  if (after < 0.0) throw Error(ErrorKind::InvalidArgument, "cost after must be >= 0");
  return {1.0 - after / before, after == 0.0};
}

double Motif::mean_gain() const {
  if (gains.empty()) return 0.0;
  return std::accumulate(gains.begin(), gains.end(), 0.0) / static_cast<double>(gains.size());
}

double Motif::utility() const { return mean_gain() * std::log2(1.0 + static_cast<double>(support)); }

std::string render_chain(const TagChain &chain) {
  std::string out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out += " -> ";
    out += chain[i];
  }
  return out;
}

namespace {

bool is_prefix(const Path &a, const Path &b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

std::vector<Motif> extract_motifs(const Explanation &e, const Vocabulary &v, std::size_t max_chain_len) {
  if (max_chain_len < 1) throw Error(ErrorKind::InvalidArgument, "max chain length must be >= 1");
  replay_explanation(e, v.rules);

  struct Region {
    Path context;
    std::vector<const ExplanationStep *> steps;
  };
  std::vector<Region> regions;
  for (const auto &s : e.steps) {
    if (!regions.empty()) {
      auto &r = regions.back();
      if (is_prefix(r.context, s.path) || is_prefix(s.path, r.context)) {
        if (s.path.size() < r.context.size()) r.context = s.path;
        r.steps.push_back(&s);
        continue;
      }
    }
    regions.push_back({s.path, {&s}});
  }

  std::vector<Motif> out;
  for (const auto &r : regions) {
    TagChain chain;
    for (const auto *s : r.steps) {
      const auto &tag = v.tag_of(s->rule);
      if (chain.empty() || chain.back() != tag) chain.push_back(tag);
    }
    if (chain.size() <= max_chain_len) {
      out.push_back({std::move(chain), r.context, 0, {}});
      continue;
    }
    for (std::size_t i = 0; i + max_chain_len <= chain.size(); ++i) {
      TagChain window(chain.begin() + static_cast<std::ptrdiff_t>(i),
                      chain.begin() + static_cast<std::ptrdiff_t>(i + max_chain_len));
      out.push_back({std::move(window), r.context, 0, {}});
    }
  }
  return out;
}

void MotifCache::update(const std::vector<Motif> &motifs, const Gain &run_gain) {
  if (!(run_gain.value > 0.0)) throw Error(ErrorKind::NonPositiveGain, "only runs with positive gain feed the cache");
  std::set<TagChain> seen;
  for (const auto &m : motifs) {
    if (m.chain.empty() || !seen.insert(m.chain).second) continue;
    auto [it, inserted] = entries_.try_emplace(m.chain, Motif{m.chain, m.context, 0, {}});
    it->second.support += 1;
    it->second.gains.push_back(run_gain.value);
  }
  ++updates_;
  evict();
}

void MotifCache::evict() {
  while (entries_.size() > capacity_) {
    auto victim = entries_.begin();
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      double u = it->second.utility();
      double vu = victim->second.utility();
      // Later keys are lexicographically greater, so >= picks the greatest among ties.
      if (u <= vu) victim = it;
    }
    entries_.erase(victim);
  }
}

std::vector<Motif> MotifCache::top(std::size_t n) const {
  std::vector<Motif> all;
  all.reserve(entries_.size());
  for (const auto &[k, m] : entries_) all.push_back(m);
  std::stable_sort(all.begin(), all.end(), [](const Motif &a, const Motif &b) { return a.utility() > b.utility(); });
  if (all.size() > n) all.resize(n);
  return all;
}

std::vector<Motif> top_motifs(const MotifCache &cache, std::size_t n) { return cache.top(n); }

std::string render_motif(const Motif &m) {
  return render_chain(m.chain) + "  utility=" + format_number(m.utility()) + " support=" + std::to_string(m.support) +
         " mean_gain=" + format_number(m.mean_gain());
}

std::string MotifCache::to_text() const {
  std::string out;
  for (const auto &[chain, m] : entries_) {
    out += "(motif (chain";
    for (const auto &t : chain) out += " " + t;
    out += ") (context";
    for (int i : m.context) out += " " + std::to_string(i);
    out += ") (gains";
    for (double g : m.gains) out += " " + format_number(g);
    out += "))\n";
  }
  return out;
}

MotifCache MotifCache::from_text(std::string_view text, std::size_t capacity) {
  MotifCache cache(capacity);
  for (const auto &f : parse_sexprs(text)) {
    if (!f.is_form("motif") || f.items.size() != 4 || !f.items[1].is_form("chain") || !f.items[2].is_form("context") ||
        !f.items[3].is_form("gains")) {
      throw Error(ErrorKind::ParseError, "expected (motif (chain ...) (context ...) (gains ...))", f.where);
    }
    Motif m;
    for (std::size_t i = 1; i < f.items[1].items.size(); ++i) m.chain.push_back(expect_atom(f.items[1].items[i], "tag"));
    for (std::size_t i = 1; i < f.items[2].items.size(); ++i) {
      m.context.push_back(static_cast<int>(expect_int(f.items[2].items[i], "path index")));
    }
    for (std::size_t i = 1; i < f.items[3].items.size(); ++i) m.gains.push_back(expect_number(f.items[3].items[i], "gain"));
    if (m.chain.empty()) throw Error(ErrorKind::ParseError, "motif with empty chain", f.where);
    m.support = m.gains.size();
    cache.entries_[m.chain] = std::move(m);
  }
  cache.evict();
  return cache;
}

}  // namespace stratsat
