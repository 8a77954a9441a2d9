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

#include <numeric>
#include <sstream>

#include "stratsat/interpreter.hpp"
#include "stratsat/provider.hpp"
#include "stratsat/toy_domain.hpp"
#include "stratsat/workflow.hpp"
#include "support/oracles.hpp"

namespace stratsat {
namespace {

const std::string kSessionDir = std::string(STRATSAT_DATA_DIR) + "/toy/v1/session/";

SessionConfig shipped_config() { return load_session_config(kSessionDir + "session.cfg"); }

// Same settings over the two-lane shipped cases, which run quickly.
SessionConfig small_config() {
  auto c = shipped_config();
  c.cases.clear();
  for (const auto &tc : toy::shipped_cases()) {
    if (tc.lanes == 2) c.cases.push_back({tc.name, tc.root});
  }
  return c;
}

std::string reference_proposal() {
  return "(propose-strategy " + std::string(toy::reference_strategy_text()) + ")\n";
}

TEST(Config, ShippedSessionLoads) {
  auto c = shipped_config();
  EXPECT_EQ(c.cases.size(), 3u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.max_iterations, 24);
  EXPECT_EQ(c.full_budget.node_cap, 200000u);
  EXPECT_EQ(c.minimal_node_cap, 5000u);
  EXPECT_TRUE(std::holds_alternative<ScriptedProviderSpec>(c.provider));
}

TEST(Config, RejectsUnknownField) {
  EXPECT_THROW(parse_session_config("(session (colour blue))", "."), Error);
  auto c = parse_session_config(
      "(session (vocab \"../vocab.txt\") (costs \"../costs.txt\") (case \"../cases/dot2_a.term\")"
      " (provider http (endpoint \"http://127.0.0.1:9/x\") (model m) (key-env K) (timeout 3)))",
      kSessionDir);
  const auto &h = std::get<HttpProviderConfig>(c.provider);
  EXPECT_EQ(h.model, "m");
  EXPECT_EQ(h.timeout.count(), 3);
}

TEST(Budget, Tiers) {
  auto c = shipped_config();
  auto full = budget_for(BudgetMode::Full, c);
  auto reduced = budget_for(BudgetMode::Reduced, c);
  auto minimal = budget_for(BudgetMode::Minimal, c);
  EXPECT_EQ(full.node_cap, 200000u);
  EXPECT_EQ(reduced.node_cap, 50000u);
  EXPECT_EQ(reduced.iter_divisor, 4);
  EXPECT_EQ(minimal.node_cap, 5000u);
  EXPECT_EQ(minimal.max_iter_limit, 1);
  EXPECT_EQ(minimal.max_rounds, 1);
}

TEST(Evaluate, InertStrategyHasNoSuccess) {
  auto c = small_config();
  auto s = parse_strategy("(strategy inert (rulesets (ruleset r (tags vec-mac-opt))) (flow (phase p r 2)))");
  auto e = evaluate(s, BudgetMode::Full, c);
  ASSERT_EQ(e.runs.size(), c.cases.size());
  double baseline = 0.0;
  for (std::size_t i = 0; i < e.runs.size(); ++i) {
    EXPECT_FALSE(e.success[i]);
    baseline += c.costs.term_cost(c.cases[i].term);
  }
  EXPECT_DOUBLE_EQ(e.mean_cost, baseline / static_cast<double>(c.cases.size()));
  EXPECT_FALSE(e.passed());
}

TEST(Evaluate, MinimalClampsRepeat) {
  auto c = shipped_config();
  auto e = evaluate(toy::reference_strategy(), BudgetMode::Minimal, c);
  for (const auto &r : e.runs) {
    int rounds = 0;
    for (const auto &t : r.trace) rounds += t.kind == TraceEntry::Kind::RepeatRound;
    EXPECT_LE(rounds, 1);
  }
  EXPECT_TRUE(e.passed());
}

TEST(Evaluate, ReferencePeaksBelowFullSaturation) {
  auto c = shipped_config();
  c.cases.clear();
  for (const auto &tc : toy::shipped_cases()) c.cases.push_back({tc.name, tc.root});
  auto e = evaluate(toy::reference_strategy(), BudgetMode::Full, c);
  for (std::size_t i = 0; i < c.cases.size(); ++i) {
    auto full = run_full(c.cases[i].term, c.vocab, c.costs, c.full_budget);
    EXPECT_LT(e.runs[i].peak_nodes, full.record.peak_nodes) << c.cases[i].name;
    EXPECT_TRUE(e.success[i]);
  }
}

TEST(Evaluate, AggregateRecomputable) {
  auto c = small_config();
  auto e = evaluate(toy::reference_strategy(), BudgetMode::Reduced, c);
  auto copy = e;
  copy.mean_cost = copy.geomean_cost = -1;
  copy.max_peak_nodes = 0;
  aggregate(copy);
  EXPECT_EQ(copy.mean_cost, e.mean_cost);
  EXPECT_EQ(copy.geomean_cost, e.geomean_cost);
  EXPECT_EQ(copy.max_peak_nodes, e.max_peak_nodes);
}

TEST(Knobs, ApplyAndReject) {
  auto s = toy::reference_strategy();
  auto a = parse_action("(tune 0 (theta 0.0.0.2 0.5) (iter 0.1 3) (rounds 0.0 5) (swap-tag opt expose scalar-norm))");
  auto t = apply_knobs(s, std::get<Tune>(a).knobs);
  const auto &seq = std::get<SequenceNode>(t.flow.node);
  const auto &rep = std::get<RepeatNode>(seq.children[0].node);
  EXPECT_EQ(rep.rounds, 5);
  EXPECT_EQ(std::get<SimplifyNode>(std::get<SequenceNode>(rep.body->node).children[2].node).theta, 0.5);
  EXPECT_EQ(std::get<PhaseNode>(seq.children[1].node).iter_limit, 3);
  EXPECT_EQ(t.ruleset("opt")->tags, (std::vector<TagId>{"scalar-norm", "vec-mac-opt"}));

  for (auto bad : {"(tune 0 (theta 0.9 0.5))", "(tune 0 (iter 0.0 2))", "(tune 0 (theta 0.0.0.2 1.5))",
                   "(tune 0 (drop-tag nope expose))"}) {
    try {
      (void)apply_knobs(s, std::get<Tune>(parse_action(bad)).knobs);
      ADD_FAILURE() << bad;
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidProposal) << bad;
    }
  }
}

TEST(Actions, ParsePrintRoundTrip) {
  for (auto text : {"(propose)", "(stop)", "(partition-advice)", "(evaluate 3 reduced)",
                    "(tune 1 (penalty 0.0 4) (add-tag r t) (hint 0.1 (pref (vecmac ?a ?b ?c) prune (+ ?a ?b))))"}) {
    EXPECT_EQ(to_string(parse_action(text)), text);
  }
  EXPECT_THROW(parse_action("(evaluate 1 huge)"), Error);
  EXPECT_THROW(parse_action("(dance)"), Error);
}

TEST(Session, LegalActionsOnFreshState) {
  auto c = small_config();
  auto p = ScriptedProvider::parse("");
  auto s = start_session(c, p);
  EXPECT_EQ(legal_actions(s, c),
            (std::vector<std::string>{"(propose)", "(partition-advice)", "(request-hints <context>)", "(stop)"}));
}

TEST(Session, SingleMinimalStep) {
  auto c = small_config();
  c.seed_strategy = parse_strategy("(strategy inert (rulesets (ruleset r (tags vec-mac-opt))) (flow (phase p r 2)))");
  auto p = ScriptedProvider::parse("(choose-action (evaluate 0 minimal))");
  auto s = start_session(c, p);
  ASSERT_EQ(s.pending.size(), 1u);
  auto next = step_session(s, p, c);
  EXPECT_TRUE(next.pending.empty());
  EXPECT_EQ(next.eval_log.size(), 1u);
  EXPECT_FALSE(next.best);
  EXPECT_EQ(next.iteration, 1);
}

TEST(Session, ProposeReducedFullBeatsOrMatchesFullSaturation) {
  auto c = small_config();
  auto p = ScriptedProvider::parse(
      "(choose-action (propose)) (choose-action (evaluate 0 reduced)) (choose-action (evaluate 0 full))\n" +
      reference_proposal());
  auto s = start_session(c, p);
  for (int i = 0; i < 3; ++i) s = step_session(std::move(s), p, c);
  ASSERT_TRUE(s.best);
  double full_mean = 0.0;
  for (const auto &tc : c.cases) full_mean += run_full(tc.term, c.vocab, c.costs, c.full_budget).record.final_cost;
  full_mean /= static_cast<double>(c.cases.size());
  EXPECT_LE(s.latest(*s.best, BudgetMode::Full)->mean_cost, full_mean);
  EXPECT_EQ(select_final(s, c), toy::reference_strategy());
  EXPECT_GE(s.motif_cache.updates(), 1u);
}

TEST(Session, SelectFinalGate) {
  auto c = small_config();
  SessionState empty;
  EXPECT_THROW(select_final(empty, c), Error);

  auto p = ScriptedProvider::parse(
      "(choose-action (propose)) (choose-action (evaluate 0 reduced))\n" + reference_proposal());
  auto s = start_session(c, p);
  s = step_session(std::move(s), p, c);
  s = step_session(std::move(s), p, c);
  s.best = 0;  // forced: a record with only a reduced evaluation
  try {
    (void)select_final(s, c);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoEvaluatedStrategy);
  }
}

TEST(Session, FallbackOnExhaustedScript) {
  auto c = small_config();
  c.seed_strategy = toy::reference_strategy();
  auto p = ScriptedProvider::parse("");
  auto s = start_session(c, p);
  nlohmann::json log;
  s = step_session(std::move(s), p, c, &log);
  EXPECT_TRUE(log.at("fallback").get<bool>());
  EXPECT_EQ(log.at("provider_failures").size(), 2u);
  EXPECT_EQ(log.at("action"), "(evaluate 0 full)");
  EXPECT_EQ(s.best, 0);
  s = step_session(std::move(s), p, c, &log);
  EXPECT_EQ(log.at("action"), "(stop)");
  EXPECT_TRUE(s.stopped);
}

TEST(Session, IllegalActionCountsAsFailure) {
  auto c = small_config();
  auto p = ScriptedProvider::parse("(choose-action (evaluate 5 full)) (choose-action \"((\") (choose-action (stop))");
  auto s = start_session(c, p);
  nlohmann::json log;
  s = step_session(std::move(s), p, c, &log);
  EXPECT_EQ(log.at("provider_failures").size(), 2u);
  EXPECT_EQ(log.at("action"), "(stop)");
}

TEST(Session, InvalidProposalFeedsDigest) {
  auto c = small_config();
  auto p = ScriptedProvider::parse(
      "(choose-action (propose)) (propose-strategy (strategy bad (rulesets (ruleset r (tags vec-fusion)))"
      " (flow (phase p r 1))))");
  auto s = start_session(c, p);
  s = step_session(std::move(s), p, c);
  EXPECT_TRUE(s.pending.empty());
  ASSERT_FALSE(s.last_rejection.empty());
  EXPECT_NE(digest_state(s, c).find("vec-fusion"), std::string::npos);
}

TEST(Session, RejectsOverDeepFlow) {
  auto c = small_config();
  auto p = ScriptedProvider::parse(
      "(choose-action (propose)) (propose-strategy (strategy deep (rulesets (ruleset r (tags vec-lifting)))"
      " (flow (repeat (repeat (repeat (repeat (phase p r 1) 2) 2) 2) 2))))");
  auto s = start_session(c, p);
  s = step_session(std::move(s), p, c);
  EXPECT_TRUE(s.pending.empty());
  EXPECT_FALSE(s.last_rejection.empty());
}

TEST(Digest, FreshSession) {
  auto c = small_config();
  auto p = ScriptedProvider::parse("");
  auto s = start_session(c, p);
  auto d = digest_state(s, c);
  for (const auto &t : c.vocab.tags) EXPECT_NE(d.find(t), std::string::npos) << t;
  for (auto section : {"[best]", "[promising]", "[pending]", "[motifs]"}) {
    EXPECT_NE(d.find(section), std::string::npos) << section;
  }
  EXPECT_LE(d.size(), c.digest_char_limit);
}

TEST(Digest, ShowsCachedChainAndRespectsLimit) {
  auto c = small_config();
  auto p = ScriptedProvider::parse("");
  auto s = start_session(c, p);
  s.motif_cache.update({Motif{{"vec-lifting", "vec-mac-opt"}, {}, 0, {}}}, {0.4, false});
  EXPECT_NE(digest_state(s, c).find("vec-lifting -> vec-mac-opt"), std::string::npos);
  c.digest_char_limit = 120;
  EXPECT_LE(digest_state(s, c).size(), 120u);
}

TEST(Provider, ScriptedQueuesPerCall) {
  auto p = ScriptedProvider::parse("(choose-action (stop)) (propose-hints (pref (+ ?a 0) prune ?a)) (propose-tags (tag r t))");
  EXPECT_EQ(p.remaining(ProviderCall::ChooseAction), 1u);
  EXPECT_EQ(p.choose_action("", {}), "(stop)");
  EXPECT_THROW(p.choose_action("", {}), Error);
  EXPECT_EQ(p.propose_tags({"r"}), "(tag r t)");
  EXPECT_EQ(check_response(ProviderCall::ProposeHints, p.propose_hints("")), "");
  EXPECT_NE(check_response(ProviderCall::ChooseAction, "(fly)"), "");
}

TEST(Provider, HttpUnreachableFails) {
  HttpProvider p({"http://127.0.0.1:1/v1", "m", "STRATSAT_TEST_NO_KEY", std::chrono::seconds(2)});
  try {
    (void)p.propose_strategy("digest");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProviderFailure);
  }
}

TEST(Provider, UntaggedVocabularyAsksForTags) {
  auto c = small_config();
  c.vocab = Vocabulary{};
  c.vocab_text = "(rule add-comm (+ ?a ?b) (+ ?b ?a))";
  auto p = ScriptedProvider::parse("(propose-tags (tag add-comm scalar-norm))");
  (void)start_session(c, p);
  EXPECT_EQ(c.vocab.tag_of("add-comm"), "scalar-norm");
}

TEST(Session, ShippedRunIsDeterministic) {
  std::string first;
  for (int run = 0; run < 2; ++run) {
    auto c = shipped_config();
    auto p = make_provider(c);
    std::ostringstream out;
    auto s = run_session(c, *p, &out);
    EXPECT_TRUE(s.stopped);
    if (run == 0) {
      first = out.str();
    } else {
      EXPECT_EQ(out.str(), first);
    }
  }
  EXPECT_EQ(first.find("wall"), std::string::npos);
}

// Random legal actions from a seeded provider; checks repository invariants
// after every step.
class RandomProvider : public ProposalProvider {
 public:
  explicit RandomProvider(std::uint64_t seed) : rng_(seed) {}

  std::string propose_strategy(const std::string &) override {
    auto s = toy::reference_strategy();
    s.name = "gen" + std::to_string(n_++);
    auto &rep = std::get<RepeatNode>(std::get<SequenceNode>(s.flow.node).children[0].node);
    rep.rounds = 1 + static_cast<int>(testing::draw(rng_, 4));
    return print_strategy(s);
  }
  std::string propose_tags(const std::vector<std::string> &) override { return ""; }
  std::string propose_hints(const std::string &) override { return "(pref (vecmac ?a ?b ?c) prune (vecadd (vecmul ?a ?b) ?c))"; }
  std::string choose_action(const std::string &, const std::vector<std::string> &legal) override {
    std::vector<std::string> usable;
    for (const auto &a : legal) {
      if (a != "(stop)" && a.find('<') == std::string::npos) usable.push_back(a);
      if (a.rfind("(tune ", 0) == 0) {
        usable.push_back(a.substr(0, a.find(" <")) + " (iter 0.1 " + std::to_string(1 + testing::draw(rng_, 9)) + ")");
      }
    }
    return usable[testing::draw(rng_, usable.size())];
  }

 private:
  testing::Rng rng_;
  int n_ = 0;
};

TEST(Session, RepositoryInvariantsUnderRandomActions) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto c = small_config();
    c.promising_capacity = 2;
    c.pending_capacity = 3;
    c.max_iterations = 30;
    RandomProvider p(seed);
    auto s = start_session(c, p);
    std::optional<double> best_cost;
    while (!s.stopped && s.iteration < c.max_iterations) {
      s = step_session(std::move(s), p, c);
      ASSERT_LE(s.promising.size(), c.promising_capacity);
      ASSERT_LE(s.pending.size(), c.pending_capacity);
      for (int id : s.promising) ASSERT_FALSE(s.records[static_cast<std::size_t>(id)].evaluations.empty());
      if (!s.best) continue;
      double now = s.latest(*s.best, BudgetMode::Full)->mean_cost;
      if (best_cost) ASSERT_LE(now, *best_cost);
      best_cost = now;
      for (const auto &r : s.records) {
        if (const auto *e = s.latest(r.id, BudgetMode::Full)) ASSERT_LE(now, e->mean_cost) << "record " << r.id;
      }
    }
  }
}

}  // namespace
}  // namespace stratsat
