#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdop/error.hpp"

namespace qdop {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text);
  const Token& peek() const { return toks_[pos_]; }
  const Token& peek2() const { return toks_[pos_ + 1 < toks_.size() ? pos_ + 1 : pos_]; }
  Token next();
  bool accept(Tok k);
  Token expect(Tok k, const char* what);
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Integer linear combination of identifiers, as written inside q^[...].
struct LinearForm {
  std::vector<std::pair<std::string, int64_t>> terms;
  int64_t constant = 0;
};

int64_t to_int64(const Token& t);

// Recursive-descent parser for + - * / ^ with integer or bracketed exponents.
// The value semantics are supplied by Traits.
template <class Traits>
class AlgebraicParser {
 public:
  using Value = typename Traits::Value;
  AlgebraicParser(std::string_view text, Traits& traits) : lex_(text), tr_(traits) {}

  Value parse() {
    Value v = sum();
    if (lex_.peek().kind != Tok::End) lex_.fail("unexpected token '" + lex_.peek().text + "'");
    return v;
  }

 private:
  Value sum() {
    Value v = product();
    while (true) {
      if (lex_.accept(Tok::Plus)) {
        v = tr_.add(std::move(v), product());
      } else if (lex_.peek().kind == Tok::Minus) {
        lex_.next();
        v = tr_.sub(std::move(v), product());
      } else {
        return v;
      }
    }
  }

  Value product() {
    Value v = unary();
    while (true) {
      if (lex_.accept(Tok::Star)) {
        v = tr_.mul(std::move(v), unary());
      } else if (lex_.peek().kind == Tok::Slash) {
        Token at = lex_.next();
        v = tr_.div(std::move(v), unary(), at);
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (lex_.peek().kind == Tok::Minus) {
      lex_.next();
      return tr_.neg(unary());
    }
    if (lex_.accept(Tok::Plus)) return unary();
    return power();
  }

  Value power() {
    Value base = atom();
    if (lex_.peek().kind != Tok::Caret) return base;
    Token at = lex_.next();
    if (lex_.accept(Tok::LBracket)) {
      LinearForm lf = linear_form();
      lex_.expect(Tok::RBracket, "']'");
      return tr_.pow_linear(std::move(base), lf, at);
    }
    bool paren = lex_.accept(Tok::LParen);
    bool negative = lex_.accept(Tok::Minus);
    Token n = lex_.expect(Tok::Number, "integer exponent");
    if (paren) lex_.expect(Tok::RParen, "')'");
    int64_t e = to_int64(n);
    return tr_.pow(std::move(base), negative ? -e : e, at);
  }

  Value atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token n = lex_.next();
        return tr_.number(mpz_class(n.text), n);
      }
      case Tok::Ident: {
        Token id = lex_.next();
        if (lex_.peek().kind == Tok::LBracket) {
          lex_.next();
          std::vector<int64_t> idx;
          if (lex_.peek().kind != Tok::RBracket) {
            do {
              bool neg = lex_.accept(Tok::Minus);
              int64_t v = to_int64(lex_.expect(Tok::Number, "integer"));
              idx.push_back(neg ? -v : v);
            } while (lex_.accept(Tok::Comma));
          }
          lex_.expect(Tok::RBracket, "']'");
          return tr_.indexed(id, std::move(idx));
        }
        return tr_.ident(id);
      }
      case Tok::LParen: {
        lex_.next();
        Value v = sum();
        lex_.expect(Tok::RParen, "')'");
        return v;
      }
      default:
        lex_.fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected token '" + t.text + "'");
    }
  }

  LinearForm linear_form() {
    LinearForm lf;
    bool first = true;
    while (true) {
      int64_t sign = 1;
      if (lex_.accept(Tok::Minus)) {
        sign = -1;
      } else if (!first && !lex_.accept(Tok::Plus)) {
        return lf;
      } else if (first) {
        lex_.accept(Tok::Plus);
      }
      first = false;
      int64_t c = 1;
      bool have_num = false;
      if (lex_.peek().kind == Tok::Number) {
        c = to_int64(lex_.next());
        have_num = true;
        if (!lex_.accept(Tok::Star)) {
          if (lex_.peek().kind != Tok::Ident) {
            lf.constant += sign * c;
            continue;
          }
        }
      }
      Token id = lex_.expect(Tok::Ident, have_num ? "identifier" : "identifier or integer");
      lf.terms.emplace_back(id.text, sign * c);
    }
  }

  Lexer lex_;
  Traits& tr_;
};

}  // namespace qdop
