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

#include "stratsat/interpreter.hpp"

#include <chrono>
#include <fstream>
#include <map>

namespace stratsat {

std::string_view to_string(RunStop s) {
  switch (s) {
    case RunStop::Completed: return "completed";
    case RunStop::NodeCap: return "nodeCap";
    case RunStop::TimeCap: return "timeCap";
  }
  return "unknown";
}

std::optional<RunStop> parse_run_stop(std::string_view text) {
  for (auto s : {RunStop::Completed, RunStop::NodeCap, RunStop::TimeCap}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::string_view to_string(TraceEntry::Kind k) {
  switch (k) {
    case TraceEntry::Kind::Phase: return "phase";
    case TraceEntry::Kind::Simplify: return "simplify";
    case TraceEntry::Kind::RepeatRound: return "repeat-round";
  }
  return "unknown";
}

bool same_outcome(const RunRecord &a, const RunRecord &b) {
  return a.case_name == b.case_name && a.strategy_name == b.strategy_name && a.seed == b.seed &&
         a.initial_term == b.initial_term && a.initial_cost == b.initial_cost && a.final_term == b.final_term &&
         a.final_cost == b.final_cost && a.peak_nodes == b.peak_nodes && a.peak_classes == b.peak_classes &&
         a.stop == b.stop && a.trace == b.trace;
}

std::optional<long> sample_peak_rss_kb() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      try {
        return std::stol(line.substr(6));
      } catch (const std::exception &) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

class Interpreter {
 public:
  Interpreter(const Strategy &s, const Vocabulary &v, const CostModel &cm, const Budget &budget, RunResult &out)
      : s_(s), v_(v), cm_(cm), budget_(budget), out_(out) {
    for (const auto &r : s.rulesets) rules_.emplace(r.name, rules_with_tags(v, r.tags));
    caps_.node_cap = budget.node_cap;
    caps_.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                        std::chrono::duration<double>(budget.time_seconds));
  }

  void run() { exec(s_.flow, "0"); }

 private:
  [[nodiscard]] bool stopped() const { return out_.record.stop != RunStop::Completed; }

  std::optional<double> current_cost() {
    try {
      return extract(out_.graph, out_.root, cm_).cost;
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::NoFiniteCost) throw;
      return std::nullopt;
    }
  }

  TraceEntry &push(const std::string &id, TraceEntry::Kind kind, std::string label) {
    TraceEntry e;
    e.node_id = id;
    e.kind = kind;
    e.label = std::move(label);
    const auto &g = out_.graph;
    e.nodes_after = g.node_count();
    e.classes_after = g.class_count();
    e.peak_nodes = g.peak_node_count();
    e.peak_classes = g.peak_class_count();
    out_.record.trace.push_back(std::move(e));
    return out_.record.trace.back();
  }

  void check_time() {
    if (!stopped() && Clock::now() >= *caps_.deadline) out_.record.stop = RunStop::TimeCap;
  }

  void exec(const FlowNode &n, const std::string &id) {
    check_time();
    if (stopped()) return;
    if (const auto *p = std::get_if<PhaseNode>(&n.node)) {
      int iters = p->iter_limit;
      if (budget_.iter_divisor > 1) iters = (iters + budget_.iter_divisor - 1) / budget_.iter_divisor;
      if (budget_.max_iter_limit) iters = std::min(iters, *budget_.max_iter_limit);
      auto rep = apply_rules(out_.graph, rules_.at(p->ruleset), iters, caps_);
      if (rep.stop == StopReason::NodeCap) out_.record.stop = RunStop::NodeCap;
      if (rep.stop == StopReason::TimeCap) out_.record.stop = RunStop::TimeCap;
      auto cost = current_cost();
      auto &e = push(id, TraceEntry::Kind::Phase, p->name);
      e.saturation = rep;
      e.cost_after = cost;
    } else if (const auto *seq = std::get_if<SequenceNode>(&n.node)) {
      for (std::size_t i = 0; i < seq->children.size() && !stopped(); ++i) exec(seq->children[i], child_id(id, i));
    } else if (const auto *r = std::get_if<RepeatNode>(&n.node)) {
      int rounds = r->rounds;
      if (budget_.max_rounds) rounds = std::min(rounds, *budget_.max_rounds);
      std::optional<double> prev;
      for (int k = 1; k <= rounds && !stopped(); ++k) {
        exec(*r->body, child_id(id, 0));
        auto cost = current_cost();
        push(id, TraceEntry::Kind::RepeatRound, std::to_string(k)).cost_after = cost;
        // A failed extraction counts as no improvement.
        if (k >= 2 && (!cost || (prev && *cost >= *prev))) break;
        prev = cost;
      }
    } else {
      const auto &sn = std::get<SimplifyNode>(n.node);
      auto rep = simplify(out_.graph, SimplifySpec::from_node(sn), cm_);
      auto cost = current_cost();
      auto &e = push(id, TraceEntry::Kind::Simplify, sn.hint_guided ? "hint" : std::string(to_string(sn.mode)));
      e.simplify = rep;
      e.cost_after = cost;
    }
  }

  const Strategy &s_;
  const Vocabulary &v_;
  const CostModel &cm_;
  const Budget &budget_;
  RunResult &out_;
  std::map<std::string, std::vector<RewriteRule>> rules_;
  SaturationCaps caps_;
};

void begin(RunResult &out, const Term &input, const Vocabulary &v, const CostModel &cm, std::uint64_t seed,
           std::string case_name, std::string strategy_name) {
  out.graph = EGraph(v.signature());
  out.root = out.graph.add(input);
  out.graph.add_root(out.root);
  out.graph.reset_peaks();
  auto &rec = out.record;
  rec.case_name = std::move(case_name);
  rec.strategy_name = std::move(strategy_name);
  rec.seed = seed;
  rec.initial_term = input;
  rec.initial_cost = cm.term_cost(input);
}

void check_budget(const Budget &b) {
  if (!(b.time_seconds > 0) || b.node_cap == 0 || b.iter_divisor < 1 || (b.max_iter_limit && *b.max_iter_limit < 1) ||
      (b.max_rounds && *b.max_rounds < 1)) {
    throw Error(ErrorKind::InvalidArgument, "budget fields must be positive");
  }
}

void finish(RunResult &out, const CostModel &cm, Clock::time_point start) {
  auto &rec = out.record;
  out.root = out.graph.find(out.root);
  auto best = extract(out.graph, out.root, cm);
  rec.final_term = std::move(best.term);
  rec.final_cost = best.cost;
  rec.peak_nodes = out.graph.peak_node_count();
  rec.peak_classes = out.graph.peak_class_count();
  rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  rec.peak_rss_kb = sample_peak_rss_kb();
}

}  // namespace

RunResult run_strategy(const Strategy &s, const Term &input, const Vocabulary &v, const CostModel &cm,
                       const Budget &budget, std::uint64_t seed, std::string case_name) {
  auto diags = validate_strategy(s, v);
  if (has_errors(diags)) {
    std::string msg = "strategy '" + s.name + "' does not validate";
    for (const auto &d : diags) {
      if (d.severity == Diagnostic::Severity::Error) msg += "\n  " + to_string(d);
    }
    throw Error(ErrorKind::ValidationFailed, msg);
  }
  check_budget(budget);
  auto start = Clock::now();
  RunResult out;
  begin(out, input, v, cm, seed, std::move(case_name), s.name);
  Interpreter(s, v, cm, budget, out).run();
  finish(out, cm, start);
  return out;
}

RunRecord execute_strategy(const Strategy &s, const Term &input, const Vocabulary &v, const CostModel &cm,
                           const Budget &budget, std::uint64_t seed, std::string case_name) {
  return run_strategy(s, input, v, cm, budget, seed, std::move(case_name)).record;
}

RunResult run_full(const Term &input, const Vocabulary &v, const CostModel &cm, const Budget &budget,
                   std::uint64_t seed, std::string case_name) {
  check_budget(budget);
  auto start = Clock::now();
  RunResult out;
  begin(out, input, v, cm, seed, std::move(case_name), "full");
  SaturationCaps caps;
  caps.node_cap = budget.node_cap;
  caps.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget.time_seconds));
  int iters = budget.max_iter_limit.value_or(std::numeric_limits<int>::max());
  auto rep = apply_rules(out.graph, v.rules, iters, caps);
  if (rep.stop == StopReason::NodeCap) out.record.stop = RunStop::NodeCap;
  if (rep.stop == StopReason::TimeCap) out.record.stop = RunStop::TimeCap;
  TraceEntry e;
  e.node_id = "full";
  e.label = "all-rules";
  e.saturation = rep;
  e.nodes_after = out.graph.node_count();
  e.classes_after = out.graph.class_count();
  e.peak_nodes = out.graph.peak_node_count();
  e.peak_classes = out.graph.peak_class_count();
  out.record.trace.push_back(std::move(e));
  finish(out, cm, start);
  out.record.trace.back().cost_after = out.record.final_cost;
  return out;
}

}  // namespace stratsat
