#pragma once

// Text form of polynomials.
//
//   expr    = term { ("+" | "-") term } ;
//   term    = signed { "*" signed } ;
//   signed  = { "+" | "-" } power ;
//   power   = postfix [ "^" integer ] ;
//   postfix = primary { "'" } ;
//   primary = number | variable | "(" expr ")" ;
//   number  = digits [ "." digits ] | digits "/" digits ;
//   variable = "x" digits ;            (* x1 .. xN *)
//
// The apostrophe is the adjoint. Whitespace is ignored.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ncsos/ncpoly.hpp"
#include "ncsos/rational.hpp"
#include "ncsos/word.hpp"

namespace ncsos {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

struct Token {
  enum Kind { Number, Variable, Plus, Minus, Star, Caret, Quote, LParen, RParen, End } kind;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto digit = [&](std::size_t k) {
    return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]));
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t{Token::End, {}, line, col};
    if (digit(i)) {
      t.kind = Token::Number;
      while (digit(i)) t.text += src[i], advance();
      if (i < src.size() && (src[i] == '.' || src[i] == '/')) {
        const char sep = src[i];
        if (!digit(i + 1))
          throw ParseError(line, col + 1, std::string("expected digits after '") + sep + "'");
        t.text += sep;
        advance();
        while (digit(i)) t.text += src[i], advance();
      }
    } else if (c == 'x' || c == 'X') {
      advance();
      if (!digit(i)) throw ParseError(line, col, "expected variable index after 'x'");
      t.kind = Token::Variable;
      while (digit(i)) t.text += src[i], advance();
    } else {
      switch (c) {
        case '+': t.kind = Token::Plus; break;
        case '-': t.kind = Token::Minus; break;
        case '*': t.kind = Token::Star; break;
        case '^': t.kind = Token::Caret; break;
        case '\'': t.kind = Token::Quote; break;
        case '(': t.kind = Token::LParen; break;
        case ')': t.kind = Token::RParen; break;
        default: throw ParseError(line, col, std::string("unexpected character '") + c + "'");
      }
      t.text = c;
      advance();
    }
    out.push_back(std::move(t));
  }
  out.push_back({Token::End, {}, line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, Alphabet a) : toks_(std::move(tokens)), a_(a) {}

  NcPoly parse() {
    NcPoly p = expr();
    if (peek().kind != Token::End) fail(peek(), "unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.column, msg);
  }

  NcPoly expr() {
    NcPoly p = term();
    while (true) {
      if (accept(Token::Plus))
        p += term();
      else if (accept(Token::Minus))
        p -= term();
      else
        return p;
    }
  }

  NcPoly term() {
    NcPoly p = signed_factor();
    while (accept(Token::Star)) p = p * signed_factor();
    return p;
  }

  NcPoly signed_factor() {
    if (accept(Token::Plus)) return signed_factor();
    if (accept(Token::Minus)) return -signed_factor();
    return power();
  }

  NcPoly power() {
    NcPoly base = postfix();
    if (!accept(Token::Caret)) return base;
    const Token& t = next();
    if (t.kind != Token::Number || t.text.find_first_of("./") != std::string::npos)
      fail(t, "exponent must be a nonnegative integer");
    if (t.text.size() > 4 || std::stoul(t.text) > 1000) fail(t, "exponent too large");
    return pow(base, static_cast<unsigned>(std::stoul(t.text)));
  }

  NcPoly postfix() {
    NcPoly p = primary();
    while (accept(Token::Quote)) p = adjoint(p);
    return p;
  }

  NcPoly primary() {
    const Token& t = next();
    switch (t.kind) {
      case Token::Number:
        return NcPoly::constant(a_, parse_literal(t));
      case Token::Variable: {
        const std::size_t j = t.text.size() > 6 ? 0 : std::stoul(t.text);
        if (j < 1 || j > static_cast<std::size_t>(a_.n))
          fail(t, "variable x" + t.text + " outside x1..x" + std::to_string(a_.n));
        return NcPoly::variable(a_, static_cast<int>(j));
      }
      case Token::LParen: {
        NcPoly p = expr();
        if (!accept(Token::RParen)) fail(peek(), "expected ')'");
        return p;
      }
      case Token::End:
        fail(t, "unexpected end of input");
      default:
        fail(t, "unexpected '" + t.text + "'");
    }
  }

  static Rational parse_literal(const Token& t) {
    try {
      return parse_rational(t.text);
    } catch (const std::exception& e) {
      fail(t, e.what());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Alphabet a_;
};

}  // namespace detail

/// Parses `text` over n variables; when n is omitted it is the largest index
/// used (at least 1).
inline NcPoly parse_poly(std::string_view text, std::optional<int> n = {}) {
  auto tokens = detail::tokenize(text);
  int count = 1;
  if (n) {
    if (*n < 1) throw std::invalid_argument("n must be at least 1");
    count = *n;
  } else {
    for (const auto& t : tokens)
      if (t.kind == detail::Token::Variable) {
        if (t.text.size() > 6) throw ParseError(t.line, t.column, "variable index too large");
        count = std::max(count, std::stoi(t.text));
      }
  }
  return detail::Parser(std::move(tokens), Alphabet(count)).parse();
}

/// Renders terms in graded-lex order, e.g. "1 + x1'*x1 - 1/2*x1*x1'".
/// parse_poly(format_poly(p), p.alphabet().n) == p.
inline std::string format_poly(const NcPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    const bool negative = sgn(c) < 0;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    const Rational mag = abs(c);
    if (w.empty()) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + "*";
      out += to_string(w, p.alphabet());
    }
  }
  return out;
}

}  // namespace ncsos
