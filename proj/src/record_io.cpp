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

#include "stratsat/record_io.hpp"

#include <sstream>

#include "stratsat/sexpr.hpp"

namespace stratsat {

using nlohmann::json;

namespace {

constexpr std::string_view kRecordFormat = "stratsat-records";

json saturation_json(const SaturationReport &s) {
  return {{"iterations", s.iterations},         {"applied", s.applied},
          {"nodes_before", s.nodes_before},     {"nodes_after", s.nodes_after},
          {"classes_before", s.classes_before}, {"classes_after", s.classes_after},
          {"stop", to_string(s.stop)}};
}

SaturationReport saturation_from_json(const json &j) {
  SaturationReport s;
  s.iterations = j.at("iterations").get<int>();
  s.applied = j.at("applied").get<std::size_t>();
  s.nodes_before = j.at("nodes_before").get<std::size_t>();
  s.nodes_after = j.at("nodes_after").get<std::size_t>();
  s.classes_before = j.at("classes_before").get<std::size_t>();
  s.classes_after = j.at("classes_after").get<std::size_t>();
  auto stop = parse_stop_reason(j.at("stop").get<std::string>());
  if (!stop) throw Error(ErrorKind::ParseError, "unknown saturation stop reason");
  s.stop = *stop;
  return s;
}

json simplify_json(const SimplifyReport &s) {
  return {{"nodes_before", s.nodes_before},     {"nodes_after", s.nodes_after},
          {"classes_before", s.classes_before}, {"classes_after", s.classes_after},
          {"pruned", s.pruned},                 {"mode", to_string(s.mode)}};
}

SimplifyReport simplify_from_json(const json &j) {
  SimplifyReport s;
  s.nodes_before = j.at("nodes_before").get<std::size_t>();
  s.nodes_after = j.at("nodes_after").get<std::size_t>();
  s.classes_before = j.at("classes_before").get<std::size_t>();
  s.classes_after = j.at("classes_after").get<std::size_t>();
  s.pruned = j.at("pruned").get<std::size_t>();
  auto mode = j.at("mode").get<std::string>();
  if (mode == to_string(SimplifyMode::Prune)) {
    s.mode = SimplifyMode::Prune;
  } else if (mode == to_string(SimplifyMode::ExtractRebuild)) {
    s.mode = SimplifyMode::ExtractRebuild;
  } else {
    throw Error(ErrorKind::ParseError, "unknown simplify mode " + mode);
  }
  return s;
}

TraceEntry::Kind parse_kind(const std::string &s) {
  for (auto k : {TraceEntry::Kind::Phase, TraceEntry::Kind::Simplify, TraceEntry::Kind::RepeatRound}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::ParseError, "unknown trace entry kind " + s);
}

json coeffs_json(const ObjectiveCoeffs &c) {
  return {{"alpha", c.alpha}, {"beta", c.beta}, {"gamma", c.gamma}, {"delta", c.delta}};
}

}  // namespace

json to_json(const TraceEntry &t) {
  json j = {{"node", t.node_id},
            {"kind", to_string(t.kind)},
            {"label", t.label},
            {"nodes_after", t.nodes_after},
            {"classes_after", t.classes_after},
            {"peak_nodes", t.peak_nodes},
            {"peak_classes", t.peak_classes}};
  j["cost_after"] = t.cost_after ? json(*t.cost_after) : json(nullptr);
  if (t.saturation) j["saturation"] = saturation_json(*t.saturation);
  if (t.simplify) j["simplify"] = simplify_json(*t.simplify);
  return j;
}

TraceEntry trace_entry_from_json(const json &j) {
  TraceEntry t;
  t.node_id = j.at("node").get<std::string>();
  t.kind = parse_kind(j.at("kind").get<std::string>());
  t.label = j.at("label").get<std::string>();
  t.nodes_after = j.at("nodes_after").get<std::size_t>();
  t.classes_after = j.at("classes_after").get<std::size_t>();
  t.peak_nodes = j.at("peak_nodes").get<std::size_t>();
  t.peak_classes = j.at("peak_classes").get<std::size_t>();
  if (!j.at("cost_after").is_null()) t.cost_after = j.at("cost_after").get<double>();
  if (j.contains("saturation")) t.saturation = saturation_from_json(j.at("saturation"));
  if (j.contains("simplify")) t.simplify = simplify_from_json(j.at("simplify"));
  return t;
}

json to_json(const RunRecord &r, bool include_machine) {
  json trace = json::array();
  for (const auto &t : r.trace) trace.push_back(to_json(t));
  json j = {{"case", r.case_name},
            {"strategy", r.strategy_name},
            {"seed", r.seed},
            {"initial_term", to_string(r.initial_term)},
            {"initial_cost", r.initial_cost},
            {"final_term", to_string(r.final_term)},
            {"final_cost", r.final_cost},
            {"peak_nodes", r.peak_nodes},
            {"peak_classes", r.peak_classes},
            {"stop", to_string(r.stop)},
            {"trace", std::move(trace)}};
  if (include_machine) {
    j["wall_seconds"] = r.wall_seconds;
    j["peak_rss_kb"] = r.peak_rss_kb ? json(*r.peak_rss_kb) : json(nullptr);
  }
  return j;
}

RunRecord run_record_from_json(const json &j) {
  RunRecord r;
  try {
    r.case_name = j.at("case").get<std::string>();
    r.strategy_name = j.at("strategy").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.initial_term = parse_term(j.at("initial_term").get<std::string>());
    r.initial_cost = j.at("initial_cost").get<double>();
    r.final_term = parse_term(j.at("final_term").get<std::string>());
    r.final_cost = j.at("final_cost").get<double>();
    r.peak_nodes = j.at("peak_nodes").get<std::size_t>();
    r.peak_classes = j.at("peak_classes").get<std::size_t>();
    auto stop = parse_run_stop(j.at("stop").get<std::string>());
    if (!stop) throw Error(ErrorKind::ParseError, "unknown run stop reason");
    r.stop = *stop;
    for (const auto &t : j.at("trace")) r.trace.push_back(trace_entry_from_json(t));
    if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
    if (j.contains("peak_rss_kb") && !j.at("peak_rss_kb").is_null()) r.peak_rss_kb = j.at("peak_rss_kb").get<long>();
  } catch (const json::exception &e) {
    throw Error(ErrorKind::ParseError, std::string("malformed run record: ") + e.what());
  }
  return r;
}

std::string write_records(const std::vector<RunRecord> &records, bool include_machine) {
  std::string out = json{{"format", kRecordFormat}, {"version", kRecordFormatVersion}}.dump();
  out += '\n';
  for (const auto &r : records) {
    out += to_json(r, include_machine).dump();
    out += '\n';
  }
  return out;
}

std::vector<RunRecord> read_records(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception &e) {
      throw Error(ErrorKind::ParseError, e.what(), {lineno, 1});
    }
    if (!header) {
      if (!j.is_object() || j.value("format", "") != kRecordFormat) {
        throw Error(ErrorKind::ParseError, "missing records header", {lineno, 1});
      }
      if (j.value("version", 0) != kRecordFormatVersion) {
        throw Error(ErrorKind::ParseError, "unsupported records version", {lineno, 1});
      }
      header = true;
      continue;
    }
    try {
      out.push_back(run_record_from_json(j));
    } catch (const Error &e) {
      throw Error(ErrorKind::ParseError, e.what(), {lineno, 1});
    }
  }
  if (!header) throw Error(ErrorKind::ParseError, "empty records file");
  return out;
}

json to_json(const DependencyGraph &g) {
  json edges = json::array();
  for (const auto &e : g.edges) {
    edges.push_back({{"from", g.rules[e.from]},
                     {"to", g.rules[e.to]},
                     {"direct", e.signals.direct},
                     {"overlap", e.signals.overlap},
                     {"subtree", e.signals.subtree},
                     {"weight", e.weight}});
  }
  json self = json::array();
  for (auto i : g.self_enabling) self.push_back(g.rules[i]);
  return {{"rules", g.rules}, {"tags", g.tags}, {"edges", std::move(edges)}, {"self_enabling", std::move(self)}};
}

json to_json(const PartitionAdvice &a) {
  json phases = json::array();
  for (const auto &p : a.phases) {
    phases.push_back({{"phase", p.phase},
                      {"majority_tag", p.majority_tag},
                      {"tags", p.tags},
                      {"rules", p.rules},
                      {"exceptions", p.exceptions}});
  }
  return {{"k", a.k},
          {"coeffs", coeffs_json(a.coeffs)},
          {"score", a.score},
          {"degenerate", a.degenerate},
          {"phases", std::move(phases)}};
}

json to_json(const SweepResult &s) {
  json rows = json::array();
  for (const auto &r : s.rows) {
    rows.push_back({{"coeffs", coeffs_json(r.coeffs)},
                    {"k", r.assignment.k},
                    {"phase", r.assignment.phase},
                    {"value", r.value}});
  }
  return {{"best", coeffs_json(s.best)}, {"rows", std::move(rows)}};
}

json to_json(const Motif &m) {
  return {{"chain", m.chain},
          {"context", m.context},
          {"support", m.support},
          {"gains", m.gains},
          {"mean_gain", m.mean_gain()},
          {"utility", m.utility()}};
}

json to_json(const Comparison &c) {
  json rows = json::array();
  for (const auto &r : c.rows) {
    rows.push_back({{"case", r.case_name},
                    {"baseline_cost", r.baseline_cost},
                    {"strategy_cost", r.strategy_cost},
                    {"baseline_seconds", r.baseline_time},
                    {"strategy_seconds", r.strategy_time},
                    {"baseline_peak", r.baseline_peak},
                    {"strategy_peak", r.strategy_peak},
                    {"cost_ratio", r.cost_ratio},
                    {"speedup", r.speedup},
                    {"peak_ratio", r.peak_ratio},
                    {"excluded", r.excluded}});
  }
  return {{"rows", std::move(rows)},
          {"geomean_cost_ratio", c.geomean_cost_ratio},
          {"geomean_speedup", c.geomean_speedup},
          {"geomean_peak_ratio", c.geomean_peak_ratio},
          {"excluded", c.excluded}};
}

json to_json(const Explanation &e) {
  json steps = json::array();
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    const auto &s = e.steps[i];
    json subst = json::object();
    for (const auto &[var, term] : s.subst) subst[var] = to_string(term);
    steps.push_back({{"rule", s.rule},
                     {"path", s.path},
                     {"forward", s.forward},
                     {"subst", std::move(subst)},
                     {"result", to_string(e.terms[i + 1])}});
  }
  return {{"start", e.terms.empty() ? "" : to_string(e.terms.front())}, {"steps", std::move(steps)}};
}

}  // namespace stratsat
