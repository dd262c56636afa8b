// Copyright 2026 glmrate developers
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

#include "glmrate/formula.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "glmrate/error.hpp"

namespace glmrate {

std::string Term::key() const {
  if (kind == Kind::intercept) return "(Intercept)";
  auto sorted = factors;
  std::sort(sorted.begin(), sorted.end());
  return fmt::format("{}", fmt::join(sorted, ":"));
}

std::string Term::label() const {
  if (kind == Kind::intercept) return "(Intercept)";
  return fmt::format("{}", fmt::join(factors, ":"));
}

std::string ModelFormula::to_string() const {
  std::vector<std::string> parts;
  for (const auto& t : terms)
    if (t.kind != Term::Kind::intercept) parts.push_back(t.label());
  if (offset_log_column) parts.push_back(fmt::format("offset(log({}))", *offset_log_column));
  if (parts.empty()) parts.emplace_back("1");
  return fmt::format("{} ~ {}", response, fmt::join(parts, " + "));
}

namespace {

enum class Tok { ident, number, tilde, plus, colon, star, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::ident: return "a name";
    case Tok::number: return "a number";
    case Tok::tilde: return "'~'";
    case Tok::plus: return "'+'";
    case Tok::colon: return "':'";
    case Tok::star: return "'*'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::end: return "end of input";
  }
  return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    Tok kind;
    switch (c) {
      case '~': kind = Tok::tilde; break;
      case '+': kind = Tok::plus; break;
      case ':': kind = Tok::colon; break;
      case '*': kind = Tok::star; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      default:
        throw ParseError(fmt::format("unexpected character '{}' at column {}", c, start + 1), 0, start);
    }
    out.push_back({kind, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  ModelFormula parse() {
    ModelFormula f;
    f.response = expect(Tok::ident).text;
    expect(Tok::tilde);
    f.terms.push_back(Term::intercept());
    parse_term(f);
    while (peek().kind == Tok::plus) {
      next();
      parse_term(f);
    }
    if (peek().kind != Tok::end) fail(peek(), "'+' or end of input");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  const Token& next() { return tokens_[at_++]; }

  [[noreturn]] void fail(const Token& t, std::string_view expected) const {
    const std::string found = t.kind == Tok::end ? "end of input" : fmt::format("'{}'", t.text);
    throw ParseError(fmt::format("syntax error at column {}: expected {}, found {}", t.pos + 1, expected, found),
                     0, t.pos);
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail(peek(), describe(kind));
    return next();
  }

  static void add(ModelFormula& f, Term term) {
    const auto key = term.key();
    for (const auto& t : f.terms)
      if (t.key() == key) return;
    f.terms.push_back(std::move(term));
  }

  void parse_term(ModelFormula& f) {
    const Token& first = peek();
    if (first.kind == Tok::number) {
      if (first.text != "1") fail(first, "'1' or a factor name");
      next();
      return;  // explicit intercept; always present anyway
    }
    if (first.kind != Tok::ident) fail(first, "a term");
    next();

    if (first.text == "offset" && peek().kind == Tok::lparen) {
      next();
      const Token& fn = expect(Tok::ident);
      if (fn.text != "log") fail(fn, "'log' (only offset(log(<column>)) is supported)");
      expect(Tok::lparen);
      const Token& col = expect(Tok::ident);
      expect(Tok::rparen);
      expect(Tok::rparen);
      if (f.offset_log_column)
        throw ParseError(fmt::format("syntax error at column {}: at most one offset is allowed", first.pos + 1),
                         0, first.pos);
      f.offset_log_column = col.text;
      return;
    }

    if (peek().kind == Tok::colon || peek().kind == Tok::star) {
      const bool expand = next().kind == Tok::star;
      const Token& second = expect(Tok::ident);
      if (second.text == first.text)
        throw ParseError(
            fmt::format("syntax error at column {}: factor '{}' interacts with itself", second.pos + 1, second.text),
            0, second.pos);
      if (peek().kind == Tok::colon || peek().kind == Tok::star)
        fail(peek(), "'+' (only two-factor interactions are supported)");
      if (expand) {
        add(f, Term::main_effect(first.text));
        add(f, Term::main_effect(second.text));
      }
      add(f, Term::interaction(first.text, second.text));
      return;
    }
    add(f, Term::main_effect(first.text));
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

}  // namespace

ModelFormula parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace glmrate
