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

#include <gtest/gtest.h>

#include <cmath>

#include "stratsat/motif.hpp"
#include "stratsat/toy_domain.hpp"
#include "stratsat/vocab.hpp"
#include "support/oracles.hpp"

namespace stratsat {
namespace {

Motif motif(TagChain chain, Path context = {}) { return {std::move(chain), std::move(context), 0, {}}; }

// Saturates `input` under the tagged rules and explains input = target.
Explanation explain_with(const Term &input, const Term &target, const std::vector<TagId> &tags) {
  EGraph g(toy::vocabulary().signature());
  Id root = g.add(input);
  g.add_root(root);
  apply_rules(g, rules_with_tags(toy::vocabulary(), tags), 6);
  return g.explain(input, target);
}

TEST(Gain, Examples) {
  EXPECT_DOUBLE_EQ(gain(100, 60).value, 0.4);
  EXPECT_EQ(gain(7, 7).value, 0.0);
  auto g = gain(50, 0);
  EXPECT_EQ(g.value, 1.0);
  EXPECT_TRUE(g.degenerate);
  EXPECT_FALSE(gain(100, 60).degenerate);
  try {
    (void)gain(0, 1);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveBaseline);
  }
}

TEST(Motifs, SingleLiftStep) {
  auto e = explain_with(parse_term("(vec2 (* a b) (* c d))"), parse_term("(vecmul (vec2 a c) (vec2 b d))"),
                        {"vec-lifting"});
  ASSERT_EQ(e.steps.size(), 1u);
  auto ms = extract_motifs(e, toy::vocabulary());
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].chain, (TagChain{"vec-lifting"}));
}

TEST(Motifs, LiftThenFuseChain) {
  Term input = parse_term(read_file(std::string(STRATSAT_DATA_DIR) + "/toy/v1/motif/lift_fuse_2.term"));
  Term fused = parse_term("(vecmac (vec2 a c) (vec2 b d) (vec2 e f))");
  auto e = explain_with(input, fused, {"vec-lifting", "vec-mac-opt"});
  replay_explanation(e, toy::vocabulary().rules);
  auto ms = extract_motifs(e, toy::vocabulary());
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].chain, (TagChain{"vec-lifting", "vec-mac-opt"}));
  EXPECT_TRUE(ms[0].context.empty());
  EXPECT_EQ(render_chain(ms[0].chain), "vec-lifting -> vec-mac-opt");
}

TEST(Motifs, DisjointPathsGiveSeparateMotifs) {
  auto e = explain_with(parse_term("(+ (neg (neg a)) (neg (neg b)))"), parse_term("(+ a b)"), {"scalar-norm"});
  ASSERT_EQ(e.steps.size(), 2u);
  auto ms = extract_motifs(e, toy::vocabulary());
  ASSERT_EQ(ms.size(), 2u);
  for (const auto &m : ms) EXPECT_EQ(m.chain, (TagChain{"scalar-norm"}));
  EXPECT_NE(ms[0].context, ms[1].context);
}

TEST(Motifs, CollapseSoundness) {
  // lift-add and lift-mul share a tag, so the two proofs lift to one motif
  auto add = explain_with(parse_term("(vec2 (+ a b) (+ c d))"), parse_term("(vecadd (vec2 a c) (vec2 b d))"),
                          {"vec-lifting"});
  auto mul = explain_with(parse_term("(vec2 (* a b) (* c d))"), parse_term("(vecmul (vec2 a c) (vec2 b d))"),
                          {"vec-lifting"});
  ASSERT_NE(add.steps[0].rule, mul.steps[0].rule);
  EXPECT_EQ(extract_motifs(add, toy::vocabulary()), extract_motifs(mul, toy::vocabulary()));
}

TEST(Motifs, AdjacentDuplicateTagsCollapseAndWindows) {
  auto e = explain_with(parse_term("(vec2 (+ (* a b) c) (+ (* d e) f))"),
                        parse_term("(vecadd (vecmul (vec2 a d) (vec2 b e)) (vec2 c f))"), {"vec-lifting"});
  ASSERT_EQ(e.steps.size(), 2u);
  auto ms = extract_motifs(e, toy::vocabulary());
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].chain, (TagChain{"vec-lifting"}));

  // a hand-written proof alternating tags, cut into windows of two
  Explanation alt;
  alt.terms = {parse_term("(+ a b)"), parse_term("(+ b a)"), parse_term("(+ (+ b a) 0)"), parse_term("(+ b a)"),
               parse_term("(+ (+ b a) 0)")};
  alt.steps = {{"add-comm", {}, true, {{"a", parse_term("a")}, {"b", parse_term("b")}}},
               {"expose-add-zero", {}, true, {{"a", parse_term("(+ b a)")}}},
               {"add-zero", {}, true, {{"a", parse_term("(+ b a)")}}},
               {"expose-add-zero", {}, true, {{"a", parse_term("(+ b a)")}}}};
  auto w = extract_motifs(alt, toy::vocabulary(), 2);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0].chain, (TagChain{"scalar-norm", "expose"}));
  EXPECT_EQ(w[1].chain, (TagChain{"expose", "scalar-norm"}));
  EXPECT_EQ(w[2].chain, (TagChain{"scalar-norm", "expose"}));
  EXPECT_EQ(extract_motifs(alt, toy::vocabulary(), 4).size(), 1u);
}

TEST(Motifs, RejectsBrokenExplanation) {
  Explanation bad;
  bad.terms = {parse_term("(+ a b)"), parse_term("(+ a a)")};
  bad.steps = {{"add-comm", {}, true, {}}};
  try {
    (void)extract_motifs(bad, toy::vocabulary());
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidExplanation);
  }
}

TEST(Motifs, ContextsPrefixStepPaths) {
  for (const auto &c : toy::shipped_cases()) {
    auto f = toy::lane_forms(c.root);
    EGraph g(toy::vocabulary().signature());
    g.add_root(g.add(f.scalar));
    apply_rules(g, toy::vocabulary().rules, 12, {200000, std::nullopt});
    if (!g.lookup(f.fused)) continue;
    auto e = g.explain(f.scalar, f.fused);
    for (const auto &m : extract_motifs(e, toy::vocabulary())) {
      bool found = false;
      for (const auto &s : e.steps) {
        found |= s.path.size() >= m.context.size() && std::equal(m.context.begin(), m.context.end(), s.path.begin());
      }
      EXPECT_TRUE(found) << c.name;
    }
    EXPECT_EQ(extract_motifs(e, toy::vocabulary()), extract_motifs(e, toy::vocabulary()));
  }
}

TEST(Cache, UtilityArithmetic) {
  MotifCache cache;
  cache.update({motif({"vec-lifting", "vec-mac-opt"})}, gain(100, 60));
  ASSERT_EQ(cache.size(), 1u);
  EXPECT_DOUBLE_EQ(cache.top(1)[0].utility(), 0.4);
  cache.update({motif({"vec-lifting", "vec-mac-opt"})}, gain(100, 80));
  cache.update({motif({"vec-lifting", "vec-mac-opt"})}, gain(100, 40));
  auto m = cache.top(1)[0];
  EXPECT_EQ(m.support, 3u);
  EXPECT_NEAR(m.mean_gain(), 0.4, 1e-12);
  EXPECT_NEAR(m.utility(), 0.8, 1e-12);
  EXPECT_EQ(cache.updates(), 3u);
}

TEST(Cache, RejectsNonPositiveGain) {
  MotifCache cache;
  try {
    cache.update({motif({"x"})}, gain(5, 5));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveGain);
  }
  EXPECT_EQ(cache.size(), 0u);
}

TEST(Cache, EvictsLowerUtility) {
  MotifCache cache(1);
  cache.update({motif({"a"})}, {0.3, false});
  cache.update({motif({"b"})}, {0.5, false});
  ASSERT_EQ(cache.size(), 1u);
  EXPECT_EQ(cache.top(5)[0].chain, (TagChain{"b"}));
  MotifCache tie(1);
  tie.update({motif({"b"}), motif({"a"})}, {0.5, false});
  EXPECT_EQ(tie.top(1)[0].chain, (TagChain{"a"}));
}

TEST(Cache, TopOrdering) {
  MotifCache cache;
  cache.update({motif({"vec-lifting", "vec-mac-opt"})}, {0.4, false});
  cache.update({motif({"vec-lifting", "vec-mac-opt"})}, {0.2, false});
  cache.update({motif({"vec-lifting", "vec-mac-opt"})}, {0.6, false});
  cache.update({motif({"scalar-norm"})}, {0.1, false});
  EXPECT_TRUE(top_motifs(cache, 0).empty());
  auto all = top_motifs(cache, 10);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_GT(all[0].utility(), all[1].utility());
  auto one = top_motifs(cache, 1);
  EXPECT_EQ(one[0].chain, (TagChain{"vec-lifting", "vec-mac-opt"}));
  EXPECT_NE(render_motif(one[0]).find("vec-lifting -> vec-mac-opt"), std::string::npos);
}

TEST(Cache, FuzzBoundAndRoundTrip) {
  testing::Rng rng(4242);
  const std::vector<TagId> pool{"a", "b", "c", "d", "e"};
  MotifCache cache(6);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Motif> ms;
    std::size_t count = 1 + testing::draw(rng, 3);
    for (std::size_t j = 0; j < count; ++j) {
      TagChain chain;
      std::size_t len = 1 + testing::draw(rng, 3);
      for (std::size_t t = 0; t < len; ++t) chain.push_back(pool[testing::draw(rng, pool.size())]);
      ms.push_back(motif(chain));
    }
    double g = static_cast<double>(1 + testing::draw(rng, 99)) / 100.0;
    cache.update(ms, {g, false});
    ASSERT_LE(cache.size(), cache.capacity());
    for (const auto &[chain, m] : cache.entries()) {
      ASSERT_EQ(m.support, m.gains.size());
      ASSERT_NEAR(m.utility(), m.mean_gain() * std::log2(1.0 + static_cast<double>(m.support)), 1e-12);
    }
  }
  auto again = MotifCache::from_text(cache.to_text(), cache.capacity());
  EXPECT_EQ(again.entries(), cache.entries());
  EXPECT_EQ(again.to_text(), cache.to_text());
}

TEST(Cache, UtilityMonotone) {
  Motif m = motif({"x"});
  m.gains = {0.3};
  m.support = 1;
  double prev = m.utility();
  for (int i = 0; i < 10; ++i) {
    m.gains.push_back(0.3);
    ++m.support;
    EXPECT_GT(m.utility(), prev);
    prev = m.utility();
  }
  Motif low = m;
  for (auto &g : low.gains) g = 0.2;
  EXPECT_LT(low.utility(), m.utility());
}

}  // namespace
}  // namespace stratsat
