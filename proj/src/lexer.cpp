#include <cctype>
#include <limits>

#include "qdop/parse.hpp"

namespace qdop {

Lexer::Lexer(std::string_view text) {
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      switch (c) {
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '^': t.kind = Tok::Caret; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '[': t.kind = Tok::LBracket; break;
        case ']': t.kind = Tok::RBracket; break;
        case ',': t.kind = Tok::Comma; break;
        default:
          throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
      t.text = std::string(1, c);
      advance(1);
    }
    toks_.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  toks_.push_back(end);
}

Token Lexer::next() {
  Token t = toks_[pos_];
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool Lexer::accept(Tok k) {
  if (toks_[pos_].kind != k) return false;
  next();
  return true;
}

Token Lexer::expect(Tok k, const char* what) {
  if (toks_[pos_].kind != k) {
    const Token& t = toks_[pos_];
    fail(std::string("expected ") + what +
         (t.kind == Tok::End ? " before end of input" : ", found '" + t.text + "'"));
  }
  return next();
}

void Lexer::fail(const std::string& msg) const {
  const Token& t = toks_[pos_];
  throw SyntaxError(msg, t.line, t.column);
}

int64_t to_int64(const Token& t) {
  mpz_class v(t.text);
  if (!v.fits_slong_p()) throw SyntaxError("integer out of range", t.line, t.column);
  return v.get_si();
}

}  // namespace qdop
