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

#include "stratsat/sexpr.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stratsat {
namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (!at_end()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

  [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }

 private:
  [[nodiscard]] Location here() const { return {line_, col_}; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (!at_end()) {
      char c = text_[pos_];
      if (c == ';') {
        while (!at_end() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    Location start = here();
    char c = text_[pos_];
    if (c == '(') {
      advance();
      SExpr list = SExpr::list({});
      list.where = start;
      skip_space();
      while (true) {
        if (at_end()) throw Error(ErrorKind::ParseError, "unclosed '('", start);
        if (text_[pos_] == ')') {
          advance();
          return list;
        }
        list.items.push_back(read());
        skip_space();
      }
    }
    if (c == ')') throw Error(ErrorKind::ParseError, "unexpected ')'", start);
    if (c == '"') {
      advance();
      std::string payload;
      while (true) {
        if (at_end()) throw Error(ErrorKind::ParseError, "unterminated string", start);
        char d = advance();
        if (d == '"') break;
        if (d == '\\') {
          if (at_end()) throw Error(ErrorKind::ParseError, "unterminated string", start);
          char e = advance();
          payload.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
        } else {
          payload.push_back(d);
        }
      }
      SExpr s = SExpr::string(std::move(payload));
      s.where = start;
      return s;
    }
    std::string token;
    while (!at_end()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ' ' || d == '\t' || d == '\n' || d == '\r' || d == ';' || d == '"') break;
      if (static_cast<unsigned char>(d) < 0x20 || static_cast<unsigned char>(d) >= 0x7f) {
        throw Error(ErrorKind::ParseError, "non-ASCII or control character in token", here());
      }
      token.push_back(advance());
    }
    SExpr a = SExpr::atom(std::move(token));
    a.where = start;
    return a;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void print(const SExpr &e, std::string &out) {
  switch (e.kind) {
    case SExpr::Kind::Atom:
      out += e.text;
      return;
    case SExpr::Kind::String:
      out.push_back('"');
      for (char c : e.text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
          out += "\\n";
          continue;
        }
        out.push_back(c);
      }
      out.push_back('"');
      return;
    case SExpr::Kind::List:
      out.push_back('(');
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) out.push_back(' ');
        print(e.items[i], out);
      }
      out.push_back(')');
      return;
  }
}

}  // namespace

bool SExpr::is_form(std::string_view head) const {
  return is_list() && !items.empty() && items.front().is_atom() && items.front().text == head;
}

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

SExpr parse_sexpr(std::string_view text) {
  auto all = parse_sexprs(text);
  if (all.empty()) throw Error(ErrorKind::ParseError, "empty input", {1, 1});
  if (all.size() > 1) throw Error(ErrorKind::ParseError, "trailing content after expression", all[1].where);
  return std::move(all.front());
}

std::string to_string(const SExpr &e) {
  std::string out;
  print(e, out);
  return out;
}

const std::string &expect_atom(const SExpr &e, std::string_view what) {
  if (!e.is_atom()) throw Error(ErrorKind::ParseError, "expected " + std::string(what), e.where);
  return e.text;
}

const SExpr &expect_list(const SExpr &e, std::string_view what) {
  if (!e.is_list()) throw Error(ErrorKind::ParseError, "expected " + std::string(what), e.where);
  return e;
}

long long expect_int(const SExpr &e, std::string_view what) {
  if (e.is_atom()) {
    if (auto v = parse_int(e.text)) return *v;
  }
  throw Error(ErrorKind::ParseError, "expected integer " + std::string(what), e.where);
}

double expect_number(const SExpr &e, std::string_view what) {
  if (e.is_atom()) {
    if (auto v = parse_number(e.text)) return *v;
  }
  throw Error(ErrorKind::ParseError, "expected number " + std::string(what), e.where);
}

std::string expect_text(const SExpr &e, std::string_view what) {
  if (e.is_list()) throw Error(ErrorKind::ParseError, "expected " + std::string(what), e.where);
  return e.text;
}

std::optional<long long> parse_int(std::string_view text) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_number(std::string_view text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

}  // namespace stratsat
