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

#include "stratsat/toy_domain.hpp"

#include <random>

namespace stratsat::toy {

std::string_view vocabulary_text() {
  return R"(; Toy vectorization domain, rule list v1.
(const 0)
(op + 2)
(op * 2)
(op neg 1)
(op vec2 2)
(op vecadd 2)
(op vecmul 2)
(op vecmac 3)

(rule add-comm (+ ?a ?b) (+ ?b ?a) :tag scalar-norm)
(rule mul-comm (* ?a ?b) (* ?b ?a) :tag scalar-norm)
(rule add-zero (+ ?a 0) ?a :tag scalar-norm)
(rule neg-neg (neg (neg ?a)) ?a :tag scalar-norm)

(rule expose-add-zero ?a (+ ?a 0) :tag expose)

(rule lift-add (vec2 (+ ?a ?b) (+ ?c ?d)) (vecadd (vec2 ?a ?c) (vec2 ?b ?d)) :tag vec-lifting)
(rule lift-mul (vec2 (* ?a ?b) (* ?c ?d)) (vecmul (vec2 ?a ?c) (vec2 ?b ?d)) :tag vec-lifting)
(rule lift-vecadd (vec2 (vecadd ?a ?b) (vecadd ?c ?d)) (vecadd (vec2 ?a ?c) (vec2 ?b ?d)) :tag vec-lifting)
(rule lift-vecmul (vec2 (vecmul ?a ?b) (vecmul ?c ?d)) (vecmul (vec2 ?a ?c) (vec2 ?b ?d)) :tag vec-lifting)
(rule lift-vecmac (vec2 (vecmac ?a ?b ?c) (vecmac ?d ?e ?f)) (vecmac (vec2 ?a ?d) (vec2 ?b ?e) (vec2 ?c ?f)) :tag vec-lifting)

(rule mac-fuse (vecadd (vecmul ?a ?b) ?c) (vecmac ?a ?b ?c) :tag vec-mac-opt)
(rule mac-fuse-comm (vecadd ?c (vecmul ?a ?b)) (vecmac ?a ?b ?c) :tag vec-mac-opt)
)";
}

std::string_view cost_text() {
  return R"(; Toy cost model. Leaves and the constant 0 are free.
(default-op 1)
(default-leaf 0)
(cost + 2)
(cost * 3)
(cost neg 1)
(cost vec2 1)
(cost vecadd 3)
(cost vecmul 4)
(cost vecmac 5)
(cost 0 0)
)";
}

std::string_view reference_strategy_text() {
  return R"((strategy reference
  (rulesets
    (ruleset pre-compile (tags scalar-norm))
    (ruleset compile (tags vec-lifting))
    (ruleset opt (tags expose vec-mac-opt)))
  (flow
    (sequence
      (repeat
        (sequence
          (phase pre-compile pre-compile 2)
          (phase compile compile 4)
          (heuristic-simplify 0.3))
        20)
      (phase opt opt 10))))
)";
}

const Vocabulary &vocabulary() {
  static const Vocabulary v = load_vocabulary(vocabulary_text());
  return v;
}

const CostModel &cost_model() {
  static const CostModel cm = CostModel::parse(cost_text());
  return cm;
}

Strategy reference_strategy() { return parse_strategy(reference_strategy_text()); }

namespace {

Term lane(const std::string &p, const std::string &q, const std::string &r, bool swapped) {
  Term prod("*", {Term(p), Term(q)});
  if (swapped) return Term("+", {Term(r), std::move(prod)});
  return Term("+", {std::move(prod), Term(r)});
}

Term pack(std::vector<Term> lanes) {
  while (lanes.size() > 1) {
    std::vector<Term> next;
    for (std::size_t i = 0; i + 1 < lanes.size(); i += 2) next.emplace_back("vec2", std::vector<Term>{lanes[i], lanes[i + 1]});
    lanes = std::move(next);
  }
  return lanes.front();
}

}  // namespace

std::vector<ToyCase> generate_cases(std::uint64_t seed, int count, int lanes) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "case count must be >= 1");
  if (lanes != 2 && lanes != 4) throw Error(ErrorKind::InvalidArgument, "lanes must be 2 or 4");
  std::mt19937_64 rng(seed);
  // Raw engine output keeps the stream identical across standard libraries.
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  static const char *const kPool[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<ToyCase> out;
  for (int i = 0; i < count; ++i) {
    std::vector<Term> ls;
    for (int l = 0; l < lanes; ++l) {
      ls.push_back(lane(kPool[pick(8)], kPool[pick(8)], kPool[pick(8)], pick(3) == 0));
    }
    out.push_back({"gen" + std::to_string(lanes) + "-" + std::to_string(seed) + "-" + std::to_string(i), lanes,
                   pack(std::move(ls))});
  }
  return out;
}

std::vector<ToyCase> shipped_cases() {
  return {
      {"dot2_a", 2, parse_term("(vec2 (+ (* a b) c) (+ (* d e) f))")},
      {"dot2_b", 2, parse_term("(vec2 (+ c (* a b)) (+ (* a d) c))")},
      {"dot4_a", 4,
       parse_term("(vec2 (vec2 (+ (* a b) c) (+ (* d e) f)) (vec2 (+ (* g h) a) (+ (* b c) d)))")},
      {"dot4_b", 4,
       parse_term("(vec2 (vec2 (+ c (* a b)) (+ (* a d) c)) (vec2 (+ (* e f) g) (+ h (* e b))))")},
      {"dot4_c", 4,
       parse_term("(vec2 (vec2 (+ (* a a) b) (+ (* a a) b)) (vec2 (+ b (* c d)) (+ (* d c) b)))")},
  };
}

namespace {

struct LaneParts {
  Term p, q, r;
};

LaneParts split_lane(const Term &t) {
  auto bad = [&] { return Error(ErrorKind::InvalidArgument, "not a (+ (* p q) r) lane: " + to_string(t)); };
  if (t.op != Symbol("+") || t.children.size() != 2) throw bad();
  const Term *prod = &t.children[0];
  const Term *rest = &t.children[1];
  if (prod->op != Symbol("*")) std::swap(prod, rest);
  if (prod->op != Symbol("*") || prod->children.size() != 2) throw bad();
  return {prod->children[0], prod->children[1], *rest};
}

void collect_lanes(const Term &t, std::vector<LaneParts> &out) {
  if (t.op == Symbol("vec2") && t.children.size() == 2) {
    collect_lanes(t.children[0], out);
    collect_lanes(t.children[1], out);
    return;
  }
  out.push_back(split_lane(t));
}

}  // namespace

LaneForms lane_forms(const Term &scalar_case) {
  std::vector<LaneParts> parts;
  collect_lanes(scalar_case, parts);
  if (parts.size() != 2 && parts.size() != 4) throw Error(ErrorKind::InvalidArgument, "expected 2 or 4 lanes");
  std::vector<Term> ps, qs, rs;
  for (auto &l : parts) {
    ps.push_back(l.p);
    qs.push_back(l.q);
    rs.push_back(l.r);
  }
  Term p = pack(ps), q = pack(qs), r = pack(rs);
  Term lifted("vecadd", {Term("vecmul", {p, q}), r});
  Term fused("vecmac", {p, q, r});
  return {scalar_case, std::move(lifted), std::move(fused)};
}

}  // namespace stratsat::toy
