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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stratsat/interpreter.hpp"
#include "stratsat/metrics.hpp"
#include "stratsat/motif.hpp"
#include "stratsat/partition.hpp"
#include "stratsat/record_io.hpp"
#include "stratsat/sexpr.hpp"
#include "stratsat/workflow.hpp"

namespace {

using namespace stratsat;

enum Exit { kOk = 0, kInternal = 1, kValidation = 2, kBudget = 3, kSynthesisEmpty = 4 };

struct Common {
  std::string vocab;
  std::string costs;
  std::vector<std::string> cases;
  std::string strategy;
  double budget_seconds = 600.0;
  std::size_t node_cap = 1'000'000;
  int max_iter = 0;
  int max_rounds = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
};

void emit(const Common &o, const std::string &text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
}

Budget budget_of(const Common &o) {
  Budget b;
  b.time_seconds = o.budget_seconds;
  b.node_cap = o.node_cap;
  if (o.max_iter > 0) b.max_iter_limit = o.max_iter;
  if (o.max_rounds > 0) b.max_rounds = o.max_rounds;
  return b;
}

struct Inputs {
  Vocabulary vocab;
  CostModel costs;
  std::vector<std::pair<std::string, Term>> cases;
};

// Everything is read and checked before any engine work starts.
Inputs load_inputs(const Common &o) {
  Inputs in;
  in.vocab = load_vocabulary(read_file(o.vocab));
  // Without --costs, a costs.txt beside the vocabulary is used when present.
  std::string costs = o.costs;
  if (costs.empty()) {
    auto beside = std::filesystem::path(o.vocab).parent_path() / "costs.txt";
    if (std::filesystem::exists(beside)) costs = beside.string();
  }
  if (!costs.empty()) in.costs = CostModel::parse(read_file(costs));
  Signature sig = in.vocab.signature();
  for (const auto &p : o.cases) {
    Term t = parse_term(read_file(p));
    sig.check(t);
    in.cases.emplace_back(std::filesystem::path(p).stem().string(), std::move(t));
  }
  return in;
}

std::string render_records(const std::vector<RunRecord> &records, const std::string &format) {
  if (format == "jsonl") return write_records(records);
  std::ostringstream out;
  for (const auto &r : records) {
    out << r.case_name << ": strategy=" << r.strategy_name << " initial=" << format_number(r.initial_cost)
        << " final=" << format_number(r.final_cost) << " peak_nodes=" << r.peak_nodes
        << " stop=" << to_string(r.stop) << " seconds=" << format_number(r.wall_seconds) << "\n  "
        << to_string(r.final_term) << '\n';
  }
  return out.str();
}

int finish_runs(const Common &o, const std::vector<RunRecord> &records) {
  emit(o, render_records(records, o.format));
  bool stopped = std::any_of(records.begin(), records.end(), [](const RunRecord &r) { return r.budget_stopped(); });
  return stopped ? kBudget : kOk;
}

int cmd_run(const Common &o) {
  auto in = load_inputs(o);
  Strategy s = parse_strategy(read_file(o.strategy));
  auto diags = validate_strategy(s, in.vocab);
  for (const auto &d : diags) std::cerr << o.strategy << ": " << to_string(d) << '\n';
  if (has_errors(diags)) return kValidation;
  std::vector<RunRecord> records;
  for (const auto &[name, t] : in.cases) {
    records.push_back(execute_strategy(s, t, in.vocab, in.costs, budget_of(o), o.seed, name));
  }
  return finish_runs(o, records);
}

int cmd_full(const Common &o) {
  auto in = load_inputs(o);
  std::vector<RunRecord> records;
  for (const auto &[name, t] : in.cases) {
    records.push_back(run_full(t, in.vocab, in.costs, budget_of(o), o.seed, name).record);
  }
  return finish_runs(o, records);
}

struct SynthOptions {
  std::string config;
  std::string transcript;
  std::string cache;
  std::optional<std::uint64_t> seed;
};

int cmd_synthesize(const Common &o, const SynthOptions &so) {
  SessionConfig c = load_session_config(so.config);
  if (so.seed) c.seed = *so.seed;
  auto provider = make_provider(c);
  std::ostringstream transcript;
  SessionState s = run_session(c, *provider, &transcript);
  if (!so.transcript.empty()) write_file(so.transcript, transcript.str());
  if (!so.cache.empty()) write_file(so.cache, s.motif_cache.to_text());
  bool any_success = std::any_of(s.eval_log.begin(), s.eval_log.end(),
                                 [](const EvaluationRecord &e) { return e.successes() > 0; });
  if (!any_success) {
    std::cerr << "no strategy improved any evolution case\n";
    return kSynthesisEmpty;
  }
  Strategy final;
  try {
    final = select_final(s, c);
  } catch (const Error &e) {
    std::cerr << e.what() << '\n';
    return kSynthesisEmpty;
  }
  emit(o, print_strategy(final));
  return kOk;
}

struct PartitionOptions {
  std::vector<int> ks{2, 3, 4};
  double alpha = 1.0, beta = 0.5, gamma = 0.5, delta = 0.5;
  bool sweep = false;
  int restarts = 64;
  int iter_limit = 4;
};

int cmd_partition(const Common &o, const PartitionOptions &po) {
  auto in = load_inputs(o);
  for (int k : po.ks) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "--k must be >= 1");
  }
  auto g = build_dependency_graph(in.vocab);
  OptimizeOptions opt;
  opt.seed = o.seed;
  opt.restarts = po.restarts;
  ObjectiveCoeffs coeffs{po.alpha, po.beta, po.gamma, po.delta};
  std::optional<SweepResult> sweep;
  if (po.sweep) {
    if (in.cases.empty()) throw Error(ErrorKind::InvalidArgument, "--sweep needs at least one --case");
    // Higher is better: negated mean final cost of the advised strategy.
    auto eval = [&](const PhaseAssignment &phi) {
      auto s = strategy_from_advice(export_advice(g, phi, coeffs), po.iter_limit);
      double total = 0.0;
      for (const auto &[name, t] : in.cases) {
        total += execute_strategy(s, t, in.vocab, in.costs, budget_of(o), o.seed, name).final_cost;
      }
      return -total / static_cast<double>(in.cases.size());
    };
    sweep = sweep_coefficients(g, default_grid(), eval, po.ks, opt);
    coeffs = sweep->best;
  }
  auto phi = optimize_over_k(g, po.ks, coeffs, opt);
  auto advice = export_advice(g, phi, coeffs);
  if (advice.degenerate) std::cerr << "warning: beta = gamma = delta = 0; only forward flow is scored\n";
  if (o.format == "jsonl") {
    nlohmann::json j = {{"format", "stratsat-partition"}, {"version", kRecordFormatVersion}};
    std::string text = j.dump() + '\n' + to_json(g).dump() + '\n' + to_json(advice).dump() + '\n';
    if (sweep) text += to_json(*sweep).dump() + '\n';
    emit(o, text);
  } else {
    std::string text = render_advice(advice) + '\n';
    for (const auto &p : advice.phases) {
      text += "phase " + std::to_string(p.phase) + " rules:";
      for (const auto &r : p.rules) text += " " + r;
      text += '\n';
    }
    text += "edges:\n";
    for (const auto &e : g.edges) {
      text += "  " + g.rules[e.from] + " -> " + g.rules[e.to] + " w=" + format_number(e.weight) +
              " direct=" + (e.signals.direct ? "1" : "0") + " overlap=" + format_number(e.signals.overlap) +
              " subtree=" + (e.signals.subtree ? "1" : "0") + '\n';
    }
    for (auto i : g.self_enabling) text += "self-enabling: " + g.rules[i] + '\n';
    if (sweep) {
      text += "sweep: best alpha=" + format_number(sweep->best.alpha) + " beta=" + format_number(sweep->best.beta) +
              " gamma=" + format_number(sweep->best.gamma) + " delta=" + format_number(sweep->best.delta) + '\n';
    }
    emit(o, text);
  }
  return kOk;
}

struct MotifOptions {
  std::string cache;
  std::size_t top = kDefaultTopMotifs;
};

int cmd_motifs(const Common &o, const MotifOptions &mo) {
  MotifCache cache;
  if (!mo.cache.empty()) {
    cache = MotifCache::from_text(read_file(mo.cache));
  } else {
    if (o.strategy.empty() || o.cases.empty()) {
      throw Error(ErrorKind::InvalidArgument, "motifs needs --cache, or --strategy with --case");
    }
    auto in = load_inputs(o);
    Strategy s = parse_strategy(read_file(o.strategy));
    for (const auto &[name, t] : in.cases) {
      auto res = run_strategy(s, t, in.vocab, in.costs, budget_of(o), o.seed, name);
      const auto &r = res.record;
      if (!(r.final_cost < r.initial_cost)) continue;
      auto motifs = extract_motifs(res.graph.explain(r.initial_term, r.final_term), in.vocab);
      if (!motifs.empty()) cache.update(motifs, gain(r.initial_cost, r.final_cost));
    }
  }
  auto top = cache.top(mo.top);
  std::string text;
  if (o.format == "jsonl") {
    text = nlohmann::json{{"format", "stratsat-motifs"}, {"version", kRecordFormatVersion}}.dump() + '\n';
    for (const auto &m : top) text += to_json(m).dump() + '\n';
  } else {
    for (const auto &m : top) text += render_motif(m) + '\n';
  }
  emit(o, text);
  return kOk;
}

struct CompareOptions {
  std::string baseline;
  std::string candidate;
};

int cmd_compare(const Common &o, const CompareOptions &co) {
  auto c = compare(read_records(read_file(co.baseline)), read_records(read_file(co.candidate)));
  if (o.format == "jsonl") {
    emit(o, nlohmann::json{{"format", "stratsat-comparison"}, {"version", kRecordFormatVersion}}.dump() + '\n' +
                to_json(c).dump() + '\n');
  } else {
    emit(o, render_comparison(c));
  }
  return kOk;
}

int exit_code(const Error &e) {
  switch (e.kind()) {
    case ErrorKind::NoEvaluatedStrategy:
      return kSynthesisEmpty;
    case ErrorKind::NoFiniteCost:
    case ErrorKind::NotEquivalent:
    case ErrorKind::InvalidExplanation:
    case ErrorKind::ExplanationTooLarge:
    case ErrorKind::InvalidId:
      return kInternal;
    default:
      return kValidation;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Strategy-guided equality saturation toolkit"};
  app.require_subcommand(1);
  Common o;
  SynthOptions so;
  PartitionOptions po;
  MotifOptions mo;
  CompareOptions co;

  auto add_inputs = [&](CLI::App *sub, bool cases_required) {
    sub->add_option("--vocab", o.vocab, "Vocabulary file")->required()->check(CLI::ExistingFile);
    auto *c = sub->add_option("--case", o.cases, "Case term file (repeatable)")->check(CLI::ExistingFile);
    if (cases_required) c->required();
    sub->add_option("--costs", o.costs, "Cost model file (default: costs.txt beside the vocabulary)")->check(CLI::ExistingFile);
  };
  auto add_budget = [&](CLI::App *sub) {
    sub->add_option("--budget-seconds", o.budget_seconds, "Time cap per run")->check(CLI::PositiveNumber);
    sub->add_option("--node-cap", o.node_cap, "E-node cap per run")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", o.max_iter, "Clamp on every phase's iteration limit")->check(CLI::PositiveNumber);
    sub->add_option("--max-rounds", o.max_rounds, "Clamp on every repeat's rounds")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed recorded with each run");
  };
  auto add_output = [&](CLI::App *sub) {
    sub->add_option("--out", o.out, "Output path (default: standard output)");
    sub->add_option("--format", o.format, "text or jsonl")->check(CLI::IsMember({"text", "jsonl"}));
  };

  auto *run = app.add_subcommand("run", "Run a strategy on each case");
  add_inputs(run, true);
  run->add_option("--strategy", o.strategy, "Strategy file")->required()->check(CLI::ExistingFile);
  add_budget(run);
  add_output(run);

  auto *full = app.add_subcommand("full", "Unguided saturation with every rule");
  add_inputs(full, true);
  add_budget(full);
  add_output(full);

  auto *synth = app.add_subcommand("synthesize", "Run an offline synthesis session");
  synth->add_option("--config", so.config, "Session config file")->required()->check(CLI::ExistingFile);
  synth->add_option("--transcript", so.transcript, "Write the session transcript here");
  synth->add_option("--cache", so.cache, "Write the final motif cache here");
  synth->add_option("--seed", so.seed, "Override the session seed");
  synth->add_option("--out", o.out, "Selected strategy path (default: standard output)");

  auto *part = app.add_subcommand("partition", "Phase partition advice for a vocabulary");
  add_inputs(part, false);
  part->add_option("--k", po.ks, "Candidate phase counts (repeatable)");
  part->add_option("--alpha", po.alpha);
  part->add_option("--beta", po.beta);
  part->add_option("--gamma", po.gamma);
  part->add_option("--delta", po.delta);
  part->add_option("--restarts", po.restarts, "Local-search restarts")->check(CLI::PositiveNumber);
  part->add_flag("--sweep", po.sweep, "Sweep the coefficient grid, scoring advised strategies on --case");
  part->add_option("--iter", po.iter_limit, "Iteration limit of advised phases")->check(CLI::PositiveNumber);
  add_budget(part);
  add_output(part);

  auto *motifs = app.add_subcommand("motifs", "Report cached or freshly extracted motifs");
  motifs->add_option("--cache", mo.cache, "Motif cache file")->check(CLI::ExistingFile);
  motifs->add_option("--vocab", o.vocab, "Vocabulary file")->check(CLI::ExistingFile);
  motifs->add_option("--case", o.cases, "Case term file (repeatable)")->check(CLI::ExistingFile);
  motifs->add_option("--costs", o.costs, "Cost model file (default: costs.txt beside the vocabulary)")->check(CLI::ExistingFile);
  motifs->add_option("--strategy", o.strategy, "Strategy file")->check(CLI::ExistingFile);
  motifs->add_option("--top", mo.top, "Number of motifs to report");
  add_budget(motifs);
  add_output(motifs);

  auto *cmp = app.add_subcommand("compare", "Compare baseline and strategy run records");
  cmp->add_option("--baseline", co.baseline, "Baseline records (jsonl)")->required()->check(CLI::ExistingFile);
  cmp->add_option("--candidate", co.candidate, "Strategy records (jsonl)")->required()->check(CLI::ExistingFile);
  add_output(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(o);
    if (*full) return cmd_full(o);
    if (*synth) return cmd_synthesize(o, so);
    if (*part) return cmd_partition(o, po);
    if (*motifs) {
      if (mo.cache.empty() && o.vocab.empty()) throw Error(ErrorKind::InvalidArgument, "motifs needs --cache or --vocab");
      return cmd_motifs(o, mo);
    }
    if (*cmp) return cmd_compare(o, co);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
