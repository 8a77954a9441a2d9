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

#include "stratsat/vocab.hpp"

#include <algorithm>

namespace stratsat {

bool Vocabulary::has_tag(std::string_view tag) const { return std::find(tags.begin(), tags.end(), tag) != tags.end(); }

const RewriteRule *Vocabulary::rule(std::string_view name) const {
  auto it = std::find_if(rules.begin(), rules.end(), [&](const RewriteRule &r) { return r.name == name; });
  return it == rules.end() ? nullptr : &*it;
}

const TagId &Vocabulary::tag_of(std::string_view rule_name) const {
  const auto *r = rule(rule_name);
  if (!r) throw Error(ErrorKind::InvalidArgument, "unknown rule '" + std::string(rule_name) + "'");
  return r->tag;
}

Signature Vocabulary::signature() const {
  Signature sig;
  for (const auto &[name, arity] : operators) {
    if (arity > 0 || !constants.count(name)) sig.operators.emplace(Symbol(name), arity);
  }
  sig.constants = constants;
  return sig;
}

std::string Vocabulary::to_text() const {
  std::string out;
  for (const auto &c : constants) out += "(const " + c + ")\n";
  for (const auto &[name, arity] : operators) {
    if (!constants.count(name)) out += "(op " + name + " " + std::to_string(arity) + ")\n";
  }
  for (const auto &t : tags) out += "(tag " + t + ")\n";
  for (const auto &r : rules) {
    out += "(rule " + r.name + " " + to_string(r.lhs) + " " + to_string(r.rhs) + " :tag " + r.tag + ")\n";
  }
  return out;
}

namespace {

class Loader {
 public:
  explicit Loader(const std::map<std::string, TagId> &table) : table_(table) {}

  Vocabulary run(std::string_view text) {
    auto forms = parse_sexprs(text);
    // Declarations first so rule order in the file does not matter.
    for (const auto &f : forms) {
      if (!f.is_list() || f.items.empty()) throw Error(ErrorKind::ParseError, "expected a declaration form", f.where);
      const auto &head = expect_atom(f.items[0], "declaration keyword");
      if (head == "const") {
        expect_size(f, 2);
        declare(expect_atom(f.items[1], "constant"), 0, f.where);
        v_.constants.insert(f.items[1].text);
      } else if (head == "op") {
        expect_size(f, 3);
        auto arity = expect_int(f.items[2], "arity");
        if (arity < 0) throw Error(ErrorKind::ParseError, "negative arity", f.items[2].where);
        declare(expect_atom(f.items[1], "operator"), static_cast<int>(arity), f.where);
      } else if (head == "tag") {
        expect_size(f, 2);
        add_tag(expect_atom(f.items[1], "tag"));
      } else if (head != "rule") {
        throw Error(ErrorKind::ParseError, "unknown declaration '" + head + "'", f.where);
      }
    }
    for (const auto &f : forms) {
      if (f.items[0].text == "rule") load_rule(f);
    }
    return std::move(v_);
  }

 private:
  static void expect_size(const SExpr &f, std::size_t n) {
    if (f.items.size() != n) {
      throw Error(ErrorKind::ParseError, "'" + f.items[0].text + "' takes " + std::to_string(n - 1) + " argument(s)",
                  f.where);
    }
  }

  void declare(const std::string &sym, int arity, Location where) {
    if (sym.front() == '?') throw Error(ErrorKind::ParseError, "variables cannot be declared", where);
    auto [it, inserted] = v_.operators.emplace(sym, arity);
    if (!inserted && it->second != arity) {
      throw Error(ErrorKind::UnknownArity, "conflicting arities for '" + sym + "'", where);
    }
  }

  void add_tag(const std::string &tag) {
    if (!v_.has_tag(tag)) v_.tags.push_back(tag);
  }

  void note_symbols(const Pattern &p, Location where) {
    if (p.is_var) return;
    auto [it, inserted] = v_.operators.emplace(p.sym.name(), static_cast<int>(p.children.size()));
    if (!inserted && it->second != static_cast<int>(p.children.size())) {
      throw Error(ErrorKind::UnknownArity, "'" + p.sym.name() + "' used with " + std::to_string(p.children.size()) +
                                               " children but has arity " + std::to_string(it->second),
                  where);
    }
    for (const auto &c : p.children) note_symbols(c, where);
  }

  Pattern bind_constants(const Pattern &p, const std::vector<Symbol> &bound, const std::string &rule, Location where) {
    if (p.is_var) {
      if (std::find(bound.begin(), bound.end(), p.sym) != bound.end()) return p;
      if (v_.constants.count(p.sym.name())) return Pattern::app(p.sym.name());
      throw Error(ErrorKind::GenerativeRule,
                  "rule '" + rule + "' introduces unbound ?" + p.sym.name() + " that is not a declared constant", where);
    }
    Pattern out = p;
    for (auto &c : out.children) c = bind_constants(c, bound, rule, where);
    return out;
  }

  void load_rule(const SExpr &f) {
    const auto &items = f.items;
    if (items.size() < 4) throw Error(ErrorKind::ParseError, "expected (rule <name> <lhs> <rhs> :tag <tag>)", f.where);
    RewriteRule r;
    r.name = expect_atom(items[1], "rule name");
    r.lhs = pattern_from_sexpr(items[2]);
    Pattern rhs = pattern_from_sexpr(items[3]);
    for (std::size_t i = 4; i < items.size(); i += 2) {
      const auto &key = expect_atom(items[i], "rule option");
      if (i + 1 >= items.size()) throw Error(ErrorKind::ParseError, "option '" + key + "' needs a value", items[i].where);
      if (key != ":tag") throw Error(ErrorKind::ParseError, "unknown rule option '" + key + "'", items[i].where);
      if (!r.tag.empty()) throw Error(ErrorKind::ParseError, "rule '" + r.name + "' has more than one tag", items[i].where);
      r.tag = expect_atom(items[i + 1], "tag");
    }
    if (r.tag.empty()) {
      if (auto it = table_.find(r.name); it != table_.end()) r.tag = it->second;
    }
    if (r.tag.empty()) throw Error(ErrorKind::UntaggedRule, "rule '" + r.name + "' has no :tag", f.where);
    if (v_.rule(r.name)) throw Error(ErrorKind::DuplicateRule, "rule '" + r.name + "' defined twice", f.where);
    r.rhs = bind_constants(rhs, pattern_variables(r.lhs), r.name, f.where);
    note_symbols(r.lhs, f.where);
    note_symbols(r.rhs, f.where);
    add_tag(r.tag);
    v_.rules.push_back(std::move(r));
  }

  const std::map<std::string, TagId> &table_;
  Vocabulary v_;
};

}  // namespace

Vocabulary load_vocabulary(std::string_view text, const std::map<std::string, TagId> &tag_table) {
  return Loader(tag_table).run(text);
}

std::vector<std::string> untagged_rules(std::string_view text) {
  std::vector<std::string> out;
  for (const auto &f : parse_sexprs(text)) {
    if (!f.is_form("rule") || f.items.size() < 2) continue;
    bool tagged = false;
    for (std::size_t i = 4; i < f.items.size(); ++i) tagged |= f.items[i].is_atom() && f.items[i].text == ":tag";
    if (!tagged) out.push_back(expect_atom(f.items[1], "rule name"));
  }
  return out;
}

std::map<std::string, TagId> parse_tag_table(std::string_view text) {
  std::map<std::string, TagId> out;
  for (const auto &f : parse_sexprs(text)) {
    if (!f.is_form("tag") || f.items.size() != 3) throw Error(ErrorKind::ParseError, "expected (tag <rule> <tag>)", f.where);
    const auto &rule = expect_atom(f.items[1], "rule name");
    if (!out.emplace(rule, expect_atom(f.items[2], "tag")).second) {
      throw Error(ErrorKind::ParseError, "rule '" + rule + "' tagged twice", f.where);
    }
  }
  return out;
}

std::vector<RewriteRule> rules_with_tags(const Vocabulary &v, const std::vector<TagId> &tags) {
  for (const auto &t : tags) {
    if (!v.has_tag(t)) throw Error(ErrorKind::UnknownTag, "unknown tag '" + t + "'");
  }
  std::vector<RewriteRule> out;
  for (const auto &r : v.rules) {
    if (std::find(tags.begin(), tags.end(), r.tag) != tags.end()) out.push_back(r);
  }
  return out;
}

}  // namespace stratsat
