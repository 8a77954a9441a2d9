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

#include "stratsat/workflow.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <tuple>

#include "stratsat/metrics.hpp"
#include "stratsat/sexpr.hpp"

namespace stratsat {

using nlohmann::json;

namespace {

constexpr std::string_view kTranscriptFormat = "stratsat-transcript";
constexpr int kTranscriptVersion = 1;

std::string resolve(const std::string &base_dir, const std::string &path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::size_t positive_size(const SExpr &e, std::string_view what) {
  long long v = expect_int(e, what);
  if (v < 1) throw Error(ErrorKind::ParseError, std::string(what) + " must be >= 1", e.where);
  return static_cast<std::size_t>(v);
}

void field_size(const SExpr &f, std::size_t n) {
  if (f.items.size() != n) {
    throw Error(ErrorKind::ParseError, "'" + f.items[0].text + "' takes " + std::to_string(n - 1) + " argument(s)",
                f.where);
  }
}

HttpProviderConfig parse_http(const SExpr &f) {
  HttpProviderConfig h;
  for (std::size_t i = 2; i < f.items.size(); ++i) {
    const auto &opt = f.items[i];
    if (!opt.is_list() || opt.items.size() != 2 || !opt.items[0].is_atom()) {
      throw Error(ErrorKind::ParseError, "expected (<option> <value>)", opt.where);
    }
    const auto &key = opt.items[0].text;
    if (key == "endpoint") {
      h.endpoint = expect_text(opt.items[1], "endpoint");
    } else if (key == "model") {
      h.model = expect_text(opt.items[1], "model");
    } else if (key == "key-env") {
      h.key_env = expect_text(opt.items[1], "key-env");
    } else if (key == "timeout") {
      h.timeout = std::chrono::seconds(positive_size(opt.items[1], "timeout"));
    } else {
      throw Error(ErrorKind::ParseError, "unknown http provider option '" + key + "'", opt.where);
    }
  }
  if (h.endpoint.empty()) throw Error(ErrorKind::ParseError, "http provider needs an endpoint", f.where);
  return h;
}

std::string case_name_of(const std::string &path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

SessionConfig parse_session_config(std::string_view text, const std::string &base_dir) {
  auto top = parse_sexpr(text);
  if (!top.is_form("session")) throw Error(ErrorKind::ParseError, "expected (session ...)", top.where);
  SessionConfig c;
  std::string costs_path;
  std::vector<std::string> case_paths;
  std::string seed_strategy_path;
  bool have_vocab = false;
  for (std::size_t i = 1; i < top.items.size(); ++i) {
    const auto &f = top.items[i];
    if (!f.is_list() || f.items.empty() || !f.items[0].is_atom()) {
      throw Error(ErrorKind::ParseError, "expected a session field", f.where);
    }
    const auto &key = f.items[0].text;
    if (key == "vocab") {
      field_size(f, 2);
      c.vocab_text = read_file(resolve(base_dir, expect_text(f.items[1], "vocab path")));
      have_vocab = true;
    } else if (key == "costs") {
      field_size(f, 2);
      costs_path = resolve(base_dir, expect_text(f.items[1], "costs path"));
    } else if (key == "case") {
      field_size(f, 2);
      case_paths.push_back(resolve(base_dir, expect_text(f.items[1], "case path")));
    } else if (key == "seed") {
      field_size(f, 2);
      long long v = expect_int(f.items[1], "seed");
      if (v < 0) throw Error(ErrorKind::ParseError, "seed must be >= 0", f.items[1].where);
      c.seed = static_cast<std::uint64_t>(v);
    } else if (key == "max-iterations") {
      field_size(f, 2);
      c.max_iterations = static_cast<int>(positive_size(f.items[1], "max-iterations"));
    } else if (key == "budget") {
      if (f.items.size() < 2) throw Error(ErrorKind::ParseError, "expected (budget full|minimal ...)", f.where);
      const auto &tier = expect_atom(f.items[1], "budget tier");
      if (tier == "full") {
        field_size(f, 4);
        c.full_budget.time_seconds = expect_number(f.items[2], "seconds");
        if (!(c.full_budget.time_seconds > 0)) throw Error(ErrorKind::ParseError, "seconds must be > 0", f.items[2].where);
        c.full_budget.node_cap = positive_size(f.items[3], "node cap");
      } else if (tier == "minimal") {
        field_size(f, 3);
        c.minimal_node_cap = positive_size(f.items[2], "node cap");
      } else {
        throw Error(ErrorKind::ParseError, "budget tier must be full or minimal", f.items[1].where);
      }
    } else if (key == "capacity") {
      field_size(f, 3);
      const auto &which = expect_atom(f.items[1], "capacity name");
      auto n = positive_size(f.items[2], "capacity");
      if (which == "promising") {
        c.promising_capacity = n;
      } else if (which == "pending") {
        c.pending_capacity = n;
      } else if (which == "cache") {
        c.cache_capacity = n;
      } else {
        throw Error(ErrorKind::ParseError, "unknown capacity '" + which + "'", f.items[1].where);
      }
    } else if (key == "digest-limit") {
      field_size(f, 2);
      c.digest_char_limit = positive_size(f.items[1], "digest-limit");
    } else if (key == "top-motifs") {
      field_size(f, 2);
      c.top_motifs = positive_size(f.items[1], "top-motifs");
    } else if (key == "explain-limit") {
      field_size(f, 2);
      c.explanation_step_limit = positive_size(f.items[1], "explain-limit");
    } else if (key == "coeffs") {
      field_size(f, 5);
      c.coeffs = {expect_number(f.items[1], "alpha"), expect_number(f.items[2], "beta"),
                  expect_number(f.items[3], "gamma"), expect_number(f.items[4], "delta")};
    } else if (key == "seed-strategy") {
      field_size(f, 2);
      seed_strategy_path = resolve(base_dir, expect_text(f.items[1], "seed-strategy path"));
    } else if (key == "provider") {
      if (f.items.size() < 2) throw Error(ErrorKind::ParseError, "expected (provider scripted|http ...)", f.where);
      const auto &kind = expect_atom(f.items[1], "provider kind");
      if (kind == "scripted") {
        field_size(f, 3);
        c.provider = ScriptedProviderSpec{read_file(resolve(base_dir, expect_text(f.items[2], "script path")))};
      } else if (kind == "http") {
        c.provider = parse_http(f);
      } else {
        throw Error(ErrorKind::ParseError, "provider must be scripted or http", f.items[1].where);
      }
    } else {
      throw Error(ErrorKind::ParseError, "unknown session field '" + key + "'", f.where);
    }
  }
  if (!have_vocab) throw Error(ErrorKind::ParseError, "session needs (vocab <path>)", top.where);
  if (case_paths.empty()) throw Error(ErrorKind::ParseError, "session needs at least one (case <path>)", top.where);
  if (untagged_rules(c.vocab_text).empty()) c.vocab = load_vocabulary(c.vocab_text);
  c.costs = costs_path.empty() ? CostModel() : CostModel::parse(read_file(costs_path));
  // Cases only need operator arities, which untagged vocabularies still declare.
  std::map<std::string, TagId> placeholder;
  for (const auto &r : untagged_rules(c.vocab_text)) placeholder.emplace(r, "untagged");
  Signature sig = load_vocabulary(c.vocab_text, placeholder).signature();
  for (const auto &p : case_paths) {
    Term t = parse_term(read_file(p));
    sig.check(t);
    c.cases.push_back({case_name_of(p), std::move(t)});
  }
  if (!seed_strategy_path.empty()) c.seed_strategy = parse_strategy(read_file(seed_strategy_path));
  return c;
}

SessionConfig load_session_config(const std::string &path) {
  return parse_session_config(read_file(path), std::filesystem::path(path).parent_path().string());
}

std::unique_ptr<ProposalProvider> make_provider(const SessionConfig &c) {
  if (const auto *s = std::get_if<ScriptedProviderSpec>(&c.provider)) {
    return std::make_unique<ScriptedProvider>(ScriptedProvider::parse(s->script_text));
  }
  return std::make_unique<HttpProvider>(std::get<HttpProviderConfig>(c.provider));
}

Budget budget_for(BudgetMode mode, const SessionConfig &c) {
  Budget b = c.full_budget;
  switch (mode) {
    case BudgetMode::Full:
      break;
    case BudgetMode::Reduced:
      b.node_cap = std::max<std::size_t>(1, b.node_cap / 4);
      b.iter_divisor = 4;
      break;
    case BudgetMode::Minimal:
      b.node_cap = std::min(b.node_cap, c.minimal_node_cap);
      b.max_iter_limit = 1;
      b.max_rounds = 1;
      break;
  }
  return b;
}

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::SeedTemplate: return "seed-template";
    case Origin::Generated: return "generated";
    case Origin::Tuned: return "tuned";
  }
  return "?";
}

std::size_t EvaluationRecord::successes() const {
  return static_cast<std::size_t>(std::count(success.begin(), success.end(), true));
}

bool EvaluationRecord::passed() const {
  if (mode != BudgetMode::Minimal) return successes() > 0;
  return std::all_of(runs.begin(), runs.end(),
                     [](const RunRecord &r) { return !r.budget_stopped() && r.final_cost <= r.initial_cost; });
}

void aggregate(EvaluationRecord &e) {
  std::vector<double> costs;
  e.max_peak_nodes = 0;
  e.total_seconds = 0.0;
  for (const auto &r : e.runs) {
    costs.push_back(r.final_cost);
    e.max_peak_nodes = std::max(e.max_peak_nodes, r.peak_nodes);
    e.total_seconds += r.wall_seconds;
  }
  e.mean_cost = costs.empty() ? 0.0 : std::accumulate(costs.begin(), costs.end(), 0.0) / static_cast<double>(costs.size());
  bool positive = !costs.empty() && std::all_of(costs.begin(), costs.end(), [](double v) { return v > 0; });
  e.geomean_cost = positive ? geomean(costs) : 0.0;
}

const EvaluationRecord *SessionState::latest(int record, BudgetMode mode) const {
  const auto &evals = records.at(static_cast<std::size_t>(record)).evaluations;
  for (auto it = evals.rbegin(); it != evals.rend(); ++it) {
    const auto &e = eval_log.at(static_cast<std::size_t>(*it));
    if (e.mode == mode) return &e;
  }
  return nullptr;
}

namespace {

struct EvalRun {
  EvaluationRecord record;
  std::vector<RunResult> results;
};

// Cases run one after another so that every evaluation is reproducible
// bit for bit; each owns its e-graph.
EvalRun evaluate_with_graphs(const Strategy &s, BudgetMode mode, const SessionConfig &c) {
  EvalRun out;
  out.record.mode = mode;
  Budget b = budget_for(mode, c);
  for (const auto &ec : c.cases) {
    auto res = run_strategy(s, ec.term, c.vocab, c.costs, b, c.seed, ec.name);
    out.record.success.push_back(res.record.final_cost < res.record.initial_cost);
    out.record.runs.push_back(res.record);
    out.results.push_back(std::move(res));
  }
  aggregate(out.record);
  return out;
}

[[noreturn]] void invalid(const std::string &msg) { throw Error(ErrorKind::InvalidProposal, msg); }

FlowNode *node_at(FlowNode &n, const std::string &id, const std::string &here) {
  if (id == here) return &n;
  if (id.size() <= here.size() || id.compare(0, here.size(), here) != 0 || id[here.size()] != '.') return nullptr;
  if (auto *seq = std::get_if<SequenceNode>(&n.node)) {
    for (std::size_t i = 0; i < seq->children.size(); ++i) {
      if (auto *hit = node_at(seq->children[i], id, child_id(here, i))) return hit;
    }
  } else if (auto *rep = std::get_if<RepeatNode>(&n.node)) {
    return node_at(*rep->body, id, child_id(here, 0));
  }
  return nullptr;
}

template <typename T>
T &node_as(Strategy &s, const Knob &k, std::string_view kind) {
  FlowNode *n = node_at(s.flow, k.target, "0");
  if (!n) invalid("knob " + to_string(k) + ": no flow node " + k.target);
  auto *t = std::get_if<T>(&n->node);
  if (!t) invalid("knob " + to_string(k) + ": node " + k.target + " is not a " + std::string(kind));
  return *t;
}

RulesetDecl &ruleset_of(Strategy &s, const Knob &k) {
  for (auto &r : s.rulesets) {
    if (r.name == k.target) return r;
  }
  invalid("knob " + to_string(k) + ": no ruleset " + k.target);
}

int knob_int(const Knob &k) {
  if (k.value < 1 || k.value > 1'000'000) invalid("knob " + to_string(k) + ": value must lie in [1, 1000000]");
  return static_cast<int>(k.value);
}

}  // namespace

EvaluationRecord evaluate(const Strategy &s, BudgetMode mode, const SessionConfig &c) {
  return evaluate_with_graphs(s, mode, c).record;
}

Strategy apply_knobs(const Strategy &s, const std::vector<Knob> &knobs) {
  Strategy out = s;
  for (const auto &k : knobs) {
    switch (k.kind) {
      case Knob::Kind::Iter:
        node_as<PhaseNode>(out, k, "phase").iter_limit = knob_int(k);
        break;
      case Knob::Kind::Rounds:
        node_as<RepeatNode>(out, k, "repeat").rounds = knob_int(k);
        break;
      case Knob::Kind::Theta:
        if (!(k.value >= 0.0 && k.value <= 1.0)) invalid("knob " + to_string(k) + ": theta must lie in [0, 1]");
        node_as<SimplifyNode>(out, k, "simplify step").theta = k.value;
        break;
      case Knob::Kind::Penalty: {
        auto &n = node_as<SimplifyNode>(out, k, "simplify step");
        if (!n.hint_guided) invalid("knob " + to_string(k) + ": penalty needs a hint-simplify step");
        if (!(k.value >= 0.0 && k.value <= kMaxPenalty)) invalid("knob " + to_string(k) + ": penalty out of range");
        n.penalty = k.value;
        break;
      }
      case Knob::Kind::SwapTag: {
        auto &r = ruleset_of(out, k);
        auto it = std::find(r.tags.begin(), r.tags.end(), k.tag);
        if (it == r.tags.end()) invalid("knob " + to_string(k) + ": ruleset has no tag " + k.tag);
        if (std::find(r.tags.begin(), r.tags.end(), k.new_tag) != r.tags.end()) {
          invalid("knob " + to_string(k) + ": ruleset already has tag " + k.new_tag);
        }
        *it = k.new_tag;
        break;
      }
      case Knob::Kind::AddTag: {
        auto &r = ruleset_of(out, k);
        if (std::find(r.tags.begin(), r.tags.end(), k.tag) != r.tags.end()) {
          invalid("knob " + to_string(k) + ": ruleset already has tag " + k.tag);
        }
        r.tags.push_back(k.tag);
        break;
      }
      case Knob::Kind::DropTag: {
        auto &r = ruleset_of(out, k);
        auto it = std::find(r.tags.begin(), r.tags.end(), k.tag);
        if (it == r.tags.end()) invalid("knob " + to_string(k) + ": ruleset has no tag " + k.tag);
        if (r.tags.size() == 1) invalid("knob " + to_string(k) + ": ruleset would become empty");
        r.tags.erase(it);
        break;
      }
      case Knob::Kind::Hint: {
        auto &n = node_as<SimplifyNode>(out, k, "simplify step");
        if (n.mode != SimplifyMode::Prune) invalid("knob " + to_string(k) + ": hints need prune mode");
        n.hint_guided = true;
        n.hints.push_back(*k.hint);
        break;
      }
    }
  }
  return out;
}

namespace {

bool contains(const std::vector<int> &v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }
bool contains(const std::deque<int> &v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<int> tune_targets(const SessionState &s) {
  std::vector<int> out;
  if (s.best) out.push_back(*s.best);
  out.insert(out.end(), s.promising.begin(), s.promising.end());
  return out;
}

bool is_legal(const StrategistAction &a, const SessionState &s, const SessionConfig &c) {
  bool room = s.pending.size() < c.pending_capacity;
  if (std::holds_alternative<ProposeNew>(a)) return room;
  if (const auto *t = std::get_if<Tune>(&a)) return room && contains(tune_targets(s), t->record);
  if (const auto *e = std::get_if<Evaluate>(&a)) {
    if (contains(s.pending, e->record)) return true;
    return contains(s.promising, e->record) && !s.latest(e->record, BudgetMode::Full);
  }
  return true;
}

// Worse records sort later: evaluated at a lower tier, then higher cost,
// then newer.
std::tuple<int, double, int> eviction_key(const SessionState &s, int id) {
  for (auto [rank, mode] : {std::pair{0, BudgetMode::Full}, std::pair{1, BudgetMode::Reduced},
                            std::pair{2, BudgetMode::Minimal}}) {
    if (const auto *e = s.latest(id, mode)) return {rank, e->mean_cost, id};
  }
  return {3, 0.0, id};
}

void admit_promising(SessionState &s, int id, const SessionConfig &c, json &effects) {
  if (contains(s.promising, id) || s.best == id) return;
  s.promising.push_back(id);
  if (s.promising.size() <= c.promising_capacity) return;
  auto worst = std::max_element(s.promising.begin(), s.promising.end(),
                                [&](int a, int b) { return eviction_key(s, a) < eviction_key(s, b); });
  effects["evicted"] = *worst;
  s.promising.erase(worst);
}

std::size_t feed_motifs(SessionState &s, EvalRun &run, const SessionConfig &c, json &notes) {
  std::size_t updates = 0;
  for (std::size_t i = 0; i < run.results.size(); ++i) {
    if (!run.record.success[i]) continue;
    auto &res = run.results[i];
    const auto &rec = res.record;
    res.graph.set_explanation_step_limit(c.explanation_step_limit);
    try {
      auto ex = res.graph.explain(rec.initial_term, rec.final_term);
      auto motifs = extract_motifs(ex, c.vocab);
      if (motifs.empty()) continue;
      s.motif_cache.update(motifs, gain(rec.initial_cost, rec.final_cost));
      ++updates;
    } catch (const Error &e) {
      notes.push_back(rec.case_name + ": " + e.what());
    }
  }
  return updates;
}

json eval_json(const EvaluationRecord &e) {
  json cases = json::array();
  for (std::size_t i = 0; i < e.runs.size(); ++i) {
    const auto &r = e.runs[i];
    cases.push_back({{"case", r.case_name},
                     {"initial_cost", r.initial_cost},
                     {"final_cost", r.final_cost},
                     {"final_term", to_string(r.final_term)},
                     {"peak_nodes", r.peak_nodes},
                     {"stop", to_string(r.stop)},
                     {"success", static_cast<bool>(e.success[i])}});
  }
  return {{"evaluation", e.id},     {"record", e.strategy_id},       {"mode", to_string(e.mode)},
          {"mean_cost", e.mean_cost}, {"geomean_cost", e.geomean_cost}, {"max_peak_nodes", e.max_peak_nodes},
          {"successes", e.successes()}, {"passed", e.passed()},      {"motif_updates", e.motif_updates},
          {"cases", std::move(cases)}};
}

void reject(SessionState &s, std::vector<std::string> diags, json &effects) {
  effects["outcome"] = "rejected";
  effects["diagnostics"] = diags;
  s.last_rejection = std::move(diags);
}

void enqueue(SessionState &s, Strategy st, Origin origin, std::optional<int> parent, const SessionConfig &c,
             json &effects) {
  std::vector<std::string> diags;
  for (const auto &d : validate_strategy(st, c.vocab)) {
    if (d.severity == Diagnostic::Severity::Error) diags.push_back(to_string(d));
  }
  if (auto d = flow_depth(st.flow); d > c.max_flow_depth) {
    diags.push_back("flow nesting depth " + std::to_string(d) + " exceeds " + std::to_string(c.max_flow_depth));
  }
  if (auto n = flow_size(st.flow); n > c.max_flow_nodes) {
    diags.push_back("flow has " + std::to_string(n) + " nodes, more than " + std::to_string(c.max_flow_nodes));
  }
  if (!diags.empty()) return reject(s, std::move(diags), effects);
  StrategyRecord r;
  r.id = static_cast<int>(s.records.size());
  r.strategy = std::move(st);
  r.origin = origin;
  r.parent = parent;
  s.pending.push_back(r.id);
  effects["outcome"] = "enqueued";
  effects["record"] = r.id;
  effects["strategy"] = print_flow(r.strategy.flow);
  s.records.push_back(std::move(r));
  s.last_rejection.clear();
}

void do_evaluate(SessionState &s, const Evaluate &a, const SessionConfig &c, json &effects) {
  auto &rec = s.records.at(static_cast<std::size_t>(a.record));
  EvalRun run;
  try {
    run = evaluate_with_graphs(rec.strategy, a.mode, c);
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::ValidationFailed) throw;
    s.pending.erase(std::remove(s.pending.begin(), s.pending.end(), a.record), s.pending.end());
    return reject(s, {e.what()}, effects);
  }
  run.record.id = static_cast<int>(s.eval_log.size());
  run.record.strategy_id = a.record;
  if (a.mode != BudgetMode::Minimal) {
    json notes = json::array();
    run.record.motif_updates = feed_motifs(s, run, c, notes);
    if (!notes.empty()) effects["motif_notes"] = std::move(notes);
  }
  rec.evaluations.push_back(run.record.id);
  s.pending.erase(std::remove(s.pending.begin(), s.pending.end(), a.record), s.pending.end());
  const auto &e = s.eval_log.emplace_back(std::move(run.record));
  effects["outcome"] = "evaluated";
  effects["result"] = eval_json(e);

  if (e.mode == BudgetMode::Full) {
    const auto *best_eval = s.best ? s.latest(*s.best, BudgetMode::Full) : nullptr;
    if (!best_eval || e.mean_cost < best_eval->mean_cost) {
      auto prior = s.best;
      s.promising.erase(std::remove(s.promising.begin(), s.promising.end(), a.record), s.promising.end());
      s.best = a.record;
      effects["new_best"] = a.record;
      if (prior) admit_promising(s, *prior, c, effects);
      return;
    }
  }
  if (e.passed()) admit_promising(s, a.record, c, effects);
}

void do_hints(SessionState &s, ProposalProvider &p, const RequestHints &a, const SessionConfig &c, json &effects) {
  auto text = p.propose_hints(a.context);
  std::vector<HintPair> hints;
  std::vector<std::string> diags;
  Signature sig = c.vocab.signature();
  try {
    for (const auto &f : parse_sexprs(text)) {
      auto h = hint_from_sexpr(f);
      sig.check(h.preferred);
      sig.check(h.pruned);
      hints.push_back(std::move(h));
    }
  } catch (const Error &e) {
    diags.push_back(std::string("hints: ") + e.what());
  }
  if (!diags.empty()) return reject(s, std::move(diags), effects);
  s.hint_context = a.context;
  s.hints = std::move(hints);
  json list = json::array();
  for (const auto &h : s.hints) list.push_back(to_string(h));
  effects["outcome"] = "hints";
  effects["hints"] = std::move(list);
}

void do_advice(SessionState &s, const SessionConfig &c, json &effects) {
  auto g = build_dependency_graph(c.vocab);
  OptimizeOptions opt;
  opt.seed = s.rng_seed;
  auto phi = optimize_over_k(g, c.partition_ks, c.coeffs, opt);
  s.partition_advice = export_advice(g, phi, c.coeffs);
  effects["outcome"] = "advice";
  effects["advice"] = render_advice(*s.partition_advice);
}

json repository_json(const SessionState &s) {
  return {{"best", s.best ? json(*s.best) : json(nullptr)},
          {"promising", s.promising},
          {"pending", std::vector<int>(s.pending.begin(), s.pending.end())},
          {"cache_size", s.motif_cache.size()},
          {"cache_updates", s.motif_cache.updates()}};
}

}  // namespace

std::vector<std::string> legal_actions(const SessionState &s, const SessionConfig &c) {
  std::vector<std::string> out;
  bool room = s.pending.size() < c.pending_capacity;
  if (room) {
    out.emplace_back("(propose)");
    for (int id : tune_targets(s)) out.push_back("(tune " + std::to_string(id) + " <knob>+)");
  }
  out.emplace_back("(partition-advice)");
  out.emplace_back("(request-hints <context>)");
  for (int id : s.pending) {
    for (auto m : {BudgetMode::Minimal, BudgetMode::Reduced, BudgetMode::Full}) {
      out.push_back("(evaluate " + std::to_string(id) + " " + std::string(to_string(m)) + ")");
    }
  }
  for (int id : s.promising) {
    if (s.latest(id, BudgetMode::Full)) continue;
    for (auto m : {BudgetMode::Minimal, BudgetMode::Reduced, BudgetMode::Full}) {
      out.push_back("(evaluate " + std::to_string(id) + " " + std::string(to_string(m)) + ")");
    }
  }
  out.emplace_back("(stop)");
  return out;
}

SessionState start_session(SessionConfig &c, ProposalProvider &p) {
  if (auto missing = untagged_rules(c.vocab_text); !missing.empty()) {
    c.vocab = load_vocabulary(c.vocab_text, parse_tag_table(p.propose_tags(missing)));
  } else if (c.vocab.rules.empty()) {
    c.vocab = load_vocabulary(c.vocab_text);
  }
  SessionState s;
  s.rng_seed = c.seed;
  s.motif_cache = MotifCache(c.cache_capacity);
  if (c.seed_strategy) {
    json ignored;
    enqueue(s, *c.seed_strategy, Origin::SeedTemplate, std::nullopt, c, ignored);
    if (s.pending.empty()) {
      throw Error(ErrorKind::ValidationFailed, "seed strategy rejected: " + ignored["diagnostics"].dump());
    }
  }
  return s;
}

SessionState step_session(SessionState s, ProposalProvider &p, const SessionConfig &c, json *log) {
  if (s.stopped || s.iteration >= c.max_iterations) {
    throw Error(ErrorKind::InvalidArgument, "session has already finished");
  }
  json entry = {{"step", s.iteration}};
  auto legal = legal_actions(s, c);
  auto digest = digest_state(s, c);
  std::optional<StrategistAction> action;
  json failures = json::array();
  for (int attempt = 0; attempt < 2 && !action; ++attempt) {
    try {
      auto text = p.choose_action(digest, legal);
      StrategistAction a;
      try {
        a = parse_action(text);
      } catch (const Error &e) {
        throw Error(ErrorKind::ProviderFailure, std::string("unparsable action: ") + e.what());
      }
      if (!is_legal(a, s, c)) throw Error(ErrorKind::ProviderFailure, "illegal action " + to_string(a));
      action = std::move(a);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::ProviderFailure) throw;
      failures.push_back(e.what());
    }
  }
  if (!failures.empty()) entry["provider_failures"] = failures;
  if (!action) {
    entry["fallback"] = true;
    if (!s.pending.empty()) {
      action = Evaluate{s.pending.front(), BudgetMode::Full};
    } else {
      action = Stop{};
    }
  }
  entry["action"] = to_string(*action);

  json effects = json::object();
  try {
    if (std::holds_alternative<ProposeNew>(*action)) {
      auto text = p.propose_strategy(digest);
      try {
        enqueue(s, parse_strategy(text), Origin::Generated, std::nullopt, c, effects);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::ParseError && e.kind() != ErrorKind::GrammarViolation) throw;
        reject(s, {e.what()}, effects);
      }
    } else if (const auto *t = std::get_if<Tune>(&*action)) {
      const auto &parent = s.records.at(static_cast<std::size_t>(t->record));
      try {
        Strategy tuned = apply_knobs(parent.strategy, t->knobs);
        tuned.name = parent.strategy.name + "-t" + std::to_string(s.records.size());
        enqueue(s, std::move(tuned), Origin::Tuned, t->record, c, effects);
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::InvalidProposal) throw;
        reject(s, {e.what()}, effects);
      }
    } else if (std::holds_alternative<RequestPartitionAdvice>(*action)) {
      do_advice(s, c, effects);
    } else if (const auto *h = std::get_if<RequestHints>(&*action)) {
      do_hints(s, p, *h, c, effects);
    } else if (const auto *e = std::get_if<Evaluate>(&*action)) {
      do_evaluate(s, *e, c, effects);
    } else {
      s.stopped = true;
      effects["outcome"] = "stopped";
    }
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::ProviderFailure) throw;
    effects["outcome"] = "provider-failure";
    effects["error"] = e.what();
  }
  entry["effects"] = std::move(effects);
  ++s.iteration;
  entry["repository"] = repository_json(s);
  if (log) *log = std::move(entry);
  return s;
}

Strategy select_final(const SessionState &s, const SessionConfig &c) {
  if (!s.best) throw Error(ErrorKind::NoEvaluatedStrategy, "no strategy has been evaluated at full budget");
  const auto *e = s.latest(*s.best, BudgetMode::Full);
  if (!e || e->runs.size() != c.cases.size()) {
    throw Error(ErrorKind::NoEvaluatedStrategy, "best strategy lacks a full evaluation over every evolution case");
  }
  return s.records.at(static_cast<std::size_t>(*s.best)).strategy;
}

Strategy strategy_from_advice(const PartitionAdvice &a, int iter_limit, std::string name) {
  Strategy s;
  s.name = std::move(name);
  SequenceNode seq;
  for (const auto &g : a.phases) {
    if (g.tags.empty()) continue;
    std::string rs = "p" + std::to_string(g.phase);
    s.rulesets.push_back({rs, g.tags});
    seq.children.push_back(FlowNode{PhaseNode{rs, rs, iter_limit}, {}});
  }
  if (seq.children.empty()) throw Error(ErrorKind::InvalidArgument, "partition advice has no tagged phase");
  if (seq.children.size() == 1) {
    s.flow = std::move(seq.children.front());
  } else {
    s.flow.node = std::move(seq);
  }
  return s;
}

namespace {

std::string record_summary(const SessionState &s, int id) {
  const auto &r = s.records.at(static_cast<std::size_t>(id));
  std::string out = "record " + std::to_string(id) + " (" + std::string(to_string(r.origin));
  if (r.parent) out += " from " + std::to_string(*r.parent);
  out += ")";
  for (auto m : {BudgetMode::Full, BudgetMode::Reduced, BudgetMode::Minimal}) {
    if (const auto *e = s.latest(id, m)) {
      out += " " + std::string(to_string(m)) + ": mean=" + format_number(e->mean_cost) +
             " geomean=" + format_number(e->geomean_cost) + " peak=" + std::to_string(e->max_peak_nodes) +
             " successes=" + std::to_string(e->successes()) + "/" + std::to_string(e->runs.size());
    }
  }
  return out + "\n" + print_strategy(r.strategy);
}

}  // namespace

std::string digest_state(const SessionState &s, const SessionConfig &c) {
  std::vector<std::string> sections;
  {
    std::string t = "[tags]\n";
    for (const auto &tag : c.vocab.tags) {
      t += tag + ":";
      for (const auto &r : c.vocab.rules) {
        if (r.tag == tag) t += " " + r.name;
      }
      t += '\n';
    }
    sections.push_back(std::move(t));
  }
  {
    Budget f = budget_for(BudgetMode::Full, c);
    sections.push_back("[budget]\nfull: " + format_number(f.time_seconds) + "s node-cap " + std::to_string(f.node_cap) +
                       "; reduced: node-cap " + std::to_string(budget_for(BudgetMode::Reduced, c).node_cap) +
                       ", iterations / 4; minimal: 1 round, 1 iteration, node-cap " +
                       std::to_string(budget_for(BudgetMode::Minimal, c).node_cap) + "\niteration " +
                       std::to_string(s.iteration) + " of " + std::to_string(c.max_iterations) + "\n");
  }
  if (!s.last_rejection.empty()) {
    std::string t = "[last rejection]\n";
    for (const auto &d : s.last_rejection) t += d + '\n';
    sections.push_back(std::move(t));
  }
  sections.push_back("[best]\n" + (s.best ? record_summary(s, *s.best) : std::string()));
  {
    std::string t = "[promising]\n";
    for (int id : s.promising) t += record_summary(s, id);
    sections.push_back(std::move(t));
  }
  {
    std::string t = "[pending]\n";
    for (int id : s.pending) t += "record " + std::to_string(id) + ": " + print_flow(s.records[static_cast<std::size_t>(id)].strategy.flow) + '\n';
    sections.push_back(std::move(t));
  }
  {
    std::string t = "[motifs]\n";
    for (const auto &m : s.motif_cache.top(c.top_motifs)) t += render_motif(m) + '\n';
    sections.push_back(std::move(t));
  }
  sections.push_back("[partition advice]\n" + (s.partition_advice ? render_advice(*s.partition_advice) : std::string()));
  {
    std::string t = "[hints]\n";
    if (!s.hint_context.empty()) t += "context: " + s.hint_context + '\n';
    for (const auto &h : s.hints) t += to_string(h) + '\n';
    sections.push_back(std::move(t));
  }

  static constexpr std::string_view kCut = "...\n";
  std::string out;
  for (const auto &sec : sections) {
    if (out.size() + sec.size() <= c.digest_char_limit) {
      out += sec;
      continue;
    }
    if (out.size() + kCut.size() <= c.digest_char_limit) {
      out += sec.substr(0, c.digest_char_limit - out.size() - kCut.size());
      out += kCut;
    }
    break;
  }
  return out.substr(0, c.digest_char_limit);
}

SessionState run_session(SessionConfig &c, ProposalProvider &p, std::ostream *transcript) {
  SessionState s = start_session(c, p);
  if (transcript) {
    json cases = json::array();
    for (const auto &ec : c.cases) cases.push_back(ec.name);
    json header = {{"format", kTranscriptFormat}, {"version", kTranscriptVersion}, {"seed", c.seed},
                   {"max_iterations", c.max_iterations}, {"cases", std::move(cases)},
                   {"pending", std::vector<int>(s.pending.begin(), s.pending.end())}};
    *transcript << header.dump() << '\n';
  }
  while (!s.stopped && s.iteration < c.max_iterations) {
    json entry;
    s = step_session(std::move(s), p, c, &entry);
    if (transcript) *transcript << entry.dump() << '\n';
  }
  return s;
}

}  // namespace stratsat
