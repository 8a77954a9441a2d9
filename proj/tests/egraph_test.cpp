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

#include <algorithm>
#include <set>

#include "stratsat/egraph.hpp"
#include "stratsat/extract.hpp"
#include "stratsat/toy_domain.hpp"
#include "support/oracles.hpp"

namespace stratsat {
namespace {

RewriteRule rule(std::string name, std::string_view lhs, std::string_view rhs, std::string tag = "t") {
  return {std::move(name), parse_pattern(lhs), parse_pattern(rhs), std::move(tag)};
}

std::set<std::string> represented(const EGraph &g, Id c, int depth) {
  auto terms = testing::enumerate_terms(g, c, depth, 100000);
  std::set<std::string> out;
  for (const auto &t : *terms) out.insert(to_string(t));
  return out;
}

TEST(EGraph, AddIsIdempotent) {
  EGraph g;
  Id a = g.add(parse_term("(+ a b)"));
  Id b = g.add(parse_term("(+ a b)"));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, g.add(parse_term("(+ a c)")));
}

TEST(EGraph, AddVecmacCountsNodes) {
  EGraph g;
  g.add(parse_term("(vecmac x y z)"));
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.class_count(), 4u);
}

TEST(EGraph, SignatureRejectsBadArity) {
  EGraph g(toy::vocabulary().signature());
  EXPECT_NO_THROW(g.add(parse_term("(vec2 a b)")));
  try {
    g.add(parse_term("(vec2 a)"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
  try {
    g.add(parse_term("(frob a)"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownSymbol);
  }
}

TEST(EGraph, MergeSelfIsNoop) {
  EGraph g;
  g.register_rule(rule("R", "a", "b"));
  Id x = g.add(parse_term("x"));
  EXPECT_FALSE(g.merge(x, x, Justification::by_rule("R")));
  auto e = g.explain(parse_term("x"), parse_term("x"));
  EXPECT_TRUE(e.steps.empty());
  EXPECT_EQ(e.terms.size(), 1u);
}

TEST(EGraph, SingleUnionExplainsInOneStep) {
  EGraph g;
  g.register_rule(rule("R", "a", "b"));
  Id a = g.add(parse_term("a"));
  Id b = g.add(parse_term("b"));
  EXPECT_TRUE(g.merge(a, b, Justification::by_rule("R")));
  g.rebuild();
  auto e = g.explain(parse_term("a"), parse_term("b"));
  ASSERT_EQ(e.steps.size(), 1u);
  EXPECT_EQ(e.steps[0].rule, "R");
  EXPECT_TRUE(e.steps[0].forward);
}

TEST(EGraph, ChainedUnionsComposeInOrder) {
  EGraph g;
  g.register_rule(rule("R1", "a", "b"));
  g.register_rule(rule("R2", "b", "c"));
  Id a = g.add(parse_term("a"));
  Id b = g.add(parse_term("b"));
  Id c = g.add(parse_term("c"));
  g.merge(a, b, Justification::by_rule("R1"));
  g.merge(b, c, Justification::by_rule("R2"));
  g.rebuild();
  auto e = g.explain(parse_term("a"), parse_term("c"));
  ASSERT_EQ(e.steps.size(), 2u);
  EXPECT_EQ(e.steps[0].rule, "R1");
  EXPECT_EQ(e.steps[1].rule, "R2");
  EXPECT_EQ(to_string(e.terms[1]), "b");
  std::vector<RewriteRule> rules{rule("R1", "a", "b"), rule("R2", "b", "c")};
  replay_explanation(e, rules);
  // Reverse direction walks the same edges backwards.
  auto back = g.explain(parse_term("c"), parse_term("a"));
  ASSERT_EQ(back.steps.size(), 2u);
  EXPECT_EQ(back.steps[0].rule, "R2");
  EXPECT_FALSE(back.steps[0].forward);
  replay_explanation(back, rules);
}

TEST(EGraph, RebuildMergesCongruentParents) {
  EGraph g;
  g.register_rule(rule("R", "a", "b"));
  Id fa = g.add(parse_term("(f a)"));
  Id fb = g.add(parse_term("(f b)"));
  Id gfa = g.add(parse_term("(g (f a))"));
  Id gfb = g.add(parse_term("(g (f b))"));
  EXPECT_NE(g.find(fa), g.find(fb));
  g.merge(g.add(parse_term("a")), g.add(parse_term("b")), Justification::by_rule("R"));
  g.rebuild();
  EXPECT_EQ(g.find(fa), g.find(fb));
  EXPECT_EQ(g.find(gfa), g.find(gfb));
  EXPECT_EQ(g.check_invariants(), "");
  auto e = g.explain(parse_term("(g (f a))"), parse_term("(g (f b))"));
  ASSERT_EQ(e.steps.size(), 1u);
  EXPECT_EQ(e.steps[0].path, (Path{0, 0}));
}

TEST(EGraph, RebuildIsAFixpoint) {
  EGraph g;
  g.add(parse_term("(+ (* a b) c)"));
  g.rebuild();
  auto nodes = g.node_count();
  auto classes = g.class_ids();
  g.rebuild();
  EXPECT_EQ(g.node_count(), nodes);
  EXPECT_EQ(g.class_ids(), classes);
}

TEST(EMatch, VariableMatchesEveryClass) {
  EGraph g;
  g.add(parse_term("(+ a b)"));
  EXPECT_EQ(g.class_count(), 3u);
  EXPECT_EQ(g.ematch(parse_pattern("?x")).size(), 3u);
}

TEST(EMatch, NonlinearVariableNeedsEqualChildren) {
  EGraph g;
  g.add(parse_term("(+ a b)"));
  EXPECT_TRUE(g.ematch(parse_pattern("(+ ?x ?x)")).empty());
  g.add(parse_term("(+ c c)"));
  EXPECT_EQ(g.ematch(parse_pattern("(+ ?x ?x)")).size(), 1u);
}

TEST(EMatch, AgreesWithEnumeratedTerms) {
  EGraph g;
  g.add(parse_term("(+ a 0)"));
  g.add(parse_term("(+ 0 a)"));
  auto pat = parse_pattern("(+ ?x 0)");
  auto matches = g.ematch(pat);
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(g.term_of(matches[0].subst[0].second), parse_term("a"));
  // Oracle: filter every represented term of depth <= 2.
  std::size_t hits = 0;
  for (Id c : g.class_ids()) {
    auto terms = testing::enumerate_terms(g, c, 2, 1000);
    for (const auto &t : *terms) {
      TermSubst s;
      hits += match_term(pat, t, s);
    }
  }
  EXPECT_EQ(hits, matches.size());
}

TEST(Saturation, ZeroIterationsLeavesGraphUnchanged) {
  EGraph g;
  g.add(parse_term("(+ x 0)"));
  std::vector<RewriteRule> rules{rule("add-zero", "(+ ?a 0)", "?a")};
  auto rep = apply_rules(g, rules, 0);
  EXPECT_EQ(rep.stop, StopReason::IterLimit);
  EXPECT_EQ(rep.nodes_after, rep.nodes_before);
  EXPECT_EQ(g.class_count(), 3u);
}

TEST(Saturation, AddZeroRuleFiresOnce) {
  EGraph g;
  Id root = g.add(parse_term("(+ x 0)"));
  std::vector<RewriteRule> rules{rule("add-zero", "(+ ?a 0)", "?a")};
  auto rep = apply_rules(g, rules, 5);
  EXPECT_EQ(rep.stop, StopReason::Saturated);
  EXPECT_TRUE(g.represents(root, parse_term("x")));
  auto e = g.explain(parse_term("(+ x 0)"), parse_term("x"));
  ASSERT_EQ(e.steps.size(), 1u);
  EXPECT_EQ(e.steps[0].rule, "add-zero");
  replay_explanation(e, rules);
  EXPECT_EQ(g.check_invariants(), "");
}

TEST(Saturation, CommutativityClosureIsSmall) {
  EGraph g;
  Id root = g.add(parse_term("(+ a b)"));
  std::vector<RewriteRule> rules{rule("comm", "(+ ?x ?y)", "(+ ?y ?x)")};
  auto rep = apply_rules(g, rules, 10);
  EXPECT_EQ(rep.stop, StopReason::Saturated);
  EXPECT_LE(rep.iterations, 2);
  EXPECT_EQ(represented(g, root, 3), (std::set<std::string>{"(+ a b)", "(+ b a)"}));
  EXPECT_EQ(g.node_count(), 4u);
}

TEST(Saturation, NodeCapStops) {
  EGraph g(toy::vocabulary().signature());
  g.add(toy::shipped_cases()[2].root);
  SaturationCaps caps;
  caps.node_cap = 40;
  auto rep = apply_rules(g, toy::vocabulary().rules, 50, caps);
  EXPECT_EQ(rep.stop, StopReason::NodeCap);
}

TEST(Saturation, RepresentedTermsOnlyGrow) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    EGraph g(toy::vocabulary().signature());
    Term t = testing::random_toy_term(rng, 12, 4);
    Id root = g.add(t);
    auto before = represented(g, root, 5);
    for (int i = 0; i < 2; ++i) {
      apply_rules(g, toy::vocabulary().rules, 1);
      auto after = testing::enumerate_terms(g, root, 5, 20000);
      if (!after) break;
      std::set<std::string> now;
      for (const auto &x : *after) now.insert(to_string(x));
      EXPECT_TRUE(std::includes(now.begin(), now.end(), before.begin(), before.end()));
      before = std::move(now);
    }
  }
}

TEST(Saturation, InvariantsHoldOnRandomGraphs) {
  testing::Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    EGraph g(toy::vocabulary().signature());
    for (int r = 0; r < 3; ++r) g.add_root(g.add(testing::random_toy_term(rng, 20, 5)));
    apply_rules(g, toy::vocabulary().rules, 3, {5000, std::nullopt});
    ASSERT_EQ(g.check_invariants(), "") << "trial " << trial;
    // find is idempotent
    for (Id c : g.class_ids()) EXPECT_EQ(g.find(g.find(c)), g.find(c));
  }
}

TEST(EGraph, UnionOrderDoesNotChangePartition) {
  auto build = [](bool swap) {
    EGraph g;
    g.register_rule(rule("R", "a", "b"));
    std::vector<Id> ids;
    for (auto s : {"a", "b", "c", "d", "(f a)", "(f c)"}) ids.push_back(g.add(parse_term(s)));
    auto m = [&](Id x, Id y) { swap ? g.merge(y, x, Justification::by_rule("R")) : g.merge(x, y, Justification::by_rule("R")); };
    m(ids[0], ids[2]);
    m(ids[1], ids[3]);
    g.rebuild();
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::vector<std::size_t> same;
      for (std::size_t j = 0; j < ids.size(); ++j) {
        if (g.find(ids[i]) == g.find(ids[j])) same.push_back(j);
      }
      blocks.push_back(same);
    }
    return blocks;
  };
  EXPECT_EQ(build(false), build(true));
}

TEST(EGraph, DeterministicAcrossRuns) {
  auto run = [] {
    EGraph g(toy::vocabulary().signature());
    Id root = g.add(toy::shipped_cases()[0].root);
    g.add_root(root);
    auto rep = apply_rules(g, toy::vocabulary().rules, 6);
    return std::tuple{rep, to_string(extract(g, root, toy::cost_model()).term), g.node_count()};
  };
  EXPECT_EQ(run(), run());
}

TEST(Explain, LiftThenFuseOnTwoLanes) {
  EGraph g(toy::vocabulary().signature());
  Term input = parse_term("(vecadd (vec2 (* a b) (* c d)) (vec2 e f))");
  Id root = g.add(input);
  auto lift = rules_with_tags(toy::vocabulary(), {"vec-lifting"});
  auto fuse = rules_with_tags(toy::vocabulary(), {"vec-mac-opt"});
  apply_rules(g, lift, 4);
  apply_rules(g, fuse, 4);
  Term fused = parse_term("(vecmac (vec2 a c) (vec2 b d) (vec2 e f))");
  ASSERT_TRUE(g.represents(root, fused));
  auto e = g.explain(input, fused);
  ASSERT_EQ(e.steps.size(), 2u);
  EXPECT_EQ(e.steps[0].rule, "lift-mul");
  EXPECT_EQ(e.steps[0].path, (Path{0}));
  EXPECT_EQ(e.steps[1].rule, "mac-fuse");
  EXPECT_TRUE(e.steps[1].path.empty());
  replay_explanation(e, toy::vocabulary().rules);
}

TEST(Explain, RejectsTamperedStep) {
  EGraph g;
  g.add(parse_term("(+ x 0)"));
  std::vector<RewriteRule> rules{rule("add-zero", "(+ ?a 0)", "?a")};
  apply_rules(g, rules, 2);
  auto e = g.explain(parse_term("(+ x 0)"), parse_term("x"));
  e.terms[1] = parse_term("y");
  try {
    replay_explanation(e, rules);
    FAIL();
  } catch (const Error &err) {
    EXPECT_EQ(err.kind(), ErrorKind::InvalidExplanation);
    EXPECT_NE(std::string(err.what()).find("step 0"), std::string::npos);
  }
}

TEST(Explain, NotEquivalent) {
  EGraph g;
  g.add(parse_term("a"));
  g.add(parse_term("b"));
  try {
    (void)g.explain(parse_term("a"), parse_term("b"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotEquivalent);
  }
}

TEST(Extract, SingleLeaf) {
  EGraph g;
  Id a = g.add(parse_term("a"));
  auto x = extract(g, a, CostModel({{"a", 1}}));
  EXPECT_EQ(to_string(x.term), "a");
  EXPECT_EQ(x.cost, 1);
}

TEST(Extract, PicksCheaper) {
  EGraph g;
  Id a = g.add(parse_term("(+ a b)"));
  Id b = g.add(parse_term("(mul2 a)"));
  g.merge(a, b, Justification::congruence());
  g.rebuild();
  CostModel cm({{"+", 2}, {"mul2", 1}, {"a", 1}, {"b", 1}});
  auto x = extract(g, a, cm);
  EXPECT_EQ(to_string(x.term), "(mul2 a)");
  EXPECT_EQ(x.cost, 2);
  // Oracle: both candidate terms, costed independently.
  testing::PlainCosts pc{{{"+", 2}, {"mul2", 1}, {"a", 1}, {"b", 1}}, 1, 0};
  EXPECT_EQ(x.cost, testing::min_cost(*testing::enumerate_terms(g, a, 3, 100), pc));
}

TEST(Extract, PrefersVecmacUnderAlternateCosts) {
  EGraph g;
  g.register_rule(rule("mac-fuse", "(vecadd (vecmul ?a ?b) ?c)", "(vecmac ?a ?b ?c)"));
  Id x = g.add(parse_term("(vecadd (vecmul a b) c)"));
  Id y = g.add(parse_term("(vecmac a b c)"));
  g.merge(x, y, Justification::by_rule("mac-fuse"));
  g.rebuild();
  CostModel cm({{"vecadd", 2}, {"vecmul", 2}, {"vecmac", 3}});
  auto r = extract(g, x, cm);
  EXPECT_EQ(to_string(r.term), "(vecmac a b c)");
  EXPECT_EQ(r.cost, 3);
  EXPECT_EQ(cm.term_cost(parse_term("(vecadd (vecmul a b) c)")), 4);
}

TEST(Extract, MatchesBruteForceOnSaturatedToyGraphs) {
  testing::Rng rng(5);
  auto pc = testing::toy_costs();
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    EGraph g(toy::vocabulary().signature());
    Term t = testing::random_toy_term(rng, 15, 4);
    Id root = g.add(t);
    apply_rules(g, toy::vocabulary().rules, 2, {3000, std::nullopt});
    auto x = extract(g, root, toy::cost_model());
    if (term_depth(x.term) > 6) continue;
    auto terms = testing::enumerate_simple_terms(g, root, 6, 10000);
    if (!terms) continue;
    EXPECT_EQ(x.cost, testing::min_cost(*terms, pc)) << to_string(t);
    EXPECT_EQ(x.cost, testing::plain_cost(x.term, pc));
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(CostModel, RejectsNegativeCosts) {
  try {
    (void)CostModel::parse("(cost + -1)");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(CostModel, TextRoundTrip) {
  const auto &cm = toy::cost_model();
  auto again = CostModel::parse(cm.to_text());
  EXPECT_EQ(again.op_costs(), cm.op_costs());
  EXPECT_EQ(again.default_op(), cm.default_op());
  EXPECT_EQ(again.default_leaf(), cm.default_leaf());
}

}  // namespace
}  // namespace stratsat
