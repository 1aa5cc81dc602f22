#include "lgtrace/text.hpp"

#include "lgtrace/error.hpp"

#include <cctype>

namespace lgtrace::text {

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::end: return "end of input";
    case TokenKind::number: return "number '" + t.text + "'";
    case TokenKind::identifier: return "identifier '" + t.text + "'";
    case TokenKind::symbol: return "'" + t.text + "'";
  }
  return "?";
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    const int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        s += src[i];
        advance();
      }
      out.push_back({TokenKind::identifier, s, tl, tc});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        s += src[i];
        advance();
      }
      out.push_back({TokenKind::number, s, tl, tc});
    } else if (std::string_view("+-*/^()[],;|=").find(c) != std::string_view::npos) {
      out.push_back({TokenKind::symbol, std::string(1, c), tl, tc});
      advance();
    } else {
      throw SyntaxError(tl, tc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({TokenKind::end, "", line, col});
  return out;
}

const Token& Cursor::peek(size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

Token Cursor::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool Cursor::at_symbol(std::string_view s) const {
  return peek().kind == TokenKind::symbol && peek().text == s;
}

bool Cursor::accept(std::string_view symbol) {
  if (!at_symbol(symbol)) return false;
  next();
  return true;
}

void Cursor::fail(const std::string& expected) const {
  const Token& t = peek();
  throw SyntaxError(t.line, t.column, "expected " + expected + ", found " + describe(t));
}

Token Cursor::expect_symbol(std::string_view symbol) {
  if (!at_symbol(symbol)) fail("'" + std::string(symbol) + "'");
  return next();
}

Token Cursor::expect_identifier(std::string_view what) {
  if (peek().kind != TokenKind::identifier) fail(std::string(what));
  return next();
}

Token Cursor::expect_number() {
  if (peek().kind != TokenKind::number) fail("number");
  return next();
}

int Cursor::expect_integer() {
  const bool neg = accept("-");
  const Token t = expect_number();
  if (t.text.size() > 9) throw SyntaxError(t.line, t.column, "integer too large");
  const int v = std::stoi(t.text);
  return neg ? -v : v;
}

Rational Cursor::expect_rational() {
  bool neg = false;
  if (accept("-")) neg = true;
  else accept("+");
  Rational v(expect_number().text);
  if (accept("/")) {
    const Token d = expect_number();
    const Rational den(d.text);
    if (den == 0) throw SyntaxError(d.line, d.column, "zero denominator");
    v /= den;
  }
  return neg ? Rational(-v) : v;
}

namespace {

MultiPoly parse_sum(Cursor& cur, const Ring& ring);

MultiPoly parse_primary(Cursor& cur, const Ring& ring) {
  const Token& t = cur.peek();
  if (t.kind == TokenKind::number) return MultiPoly(Rational(cur.next().text));
  if (t.kind == TokenKind::identifier) {
    const int idx = ring.index_of(t.text);
    if (idx < 0)
      throw SemanticError(std::to_string(t.line) + ":" + std::to_string(t.column) +
                          ": unknown variable '" + t.text + "'");
    cur.next();
    return MultiPoly::variable(static_cast<size_t>(idx));
  }
  if (cur.accept("(")) {
    MultiPoly inner = parse_sum(cur, ring);
    cur.expect_symbol(")");
    return inner;
  }
  cur.fail("number, variable or '('");
}

MultiPoly parse_power(Cursor& cur, const Ring& ring) {
  MultiPoly base = parse_primary(cur, ring);
  if (!cur.accept("^")) return base;
  const Token e = cur.expect_number();
  if (e.text.size() > 4) throw SyntaxError(e.line, e.column, "exponent too large");
  return pow(base, std::stoi(e.text));
}

bool starts_factor(const Cursor& cur) {
  const Token& t = cur.peek();
  return t.kind == TokenKind::number || t.kind == TokenKind::identifier || cur.at_symbol("(");
}

MultiPoly parse_product(Cursor& cur, const Ring& ring) {
  MultiPoly acc = parse_power(cur, ring);
  while (true) {
    if (cur.accept("*")) {
      acc *= parse_power(cur, ring);
    } else if (cur.at_symbol("/")) {
      cur.next();
      const Token d = cur.expect_number();
      const Rational den(d.text);
      if (den == 0) throw SyntaxError(d.line, d.column, "zero denominator");
      acc *= Rational(1) / den;
    } else if (starts_factor(cur)) {
      acc *= parse_power(cur, ring);
    } else {
      return acc;
    }
  }
}

MultiPoly parse_sum(Cursor& cur, const Ring& ring) {
  MultiPoly acc;
  bool neg = cur.accept("-");
  if (!neg) cur.accept("+");
  while (true) {
    MultiPoly term = parse_product(cur, ring);
    if (neg) acc -= term;
    else acc += term;
    if (cur.accept("+")) neg = false;
    else if (cur.accept("-")) neg = true;
    else return acc;
  }
}

}  // namespace

MultiPoly parse_polynomial(Cursor& cursor, const Ring& ring) { return parse_sum(cursor, ring); }

MultiPoly parse_polynomial(std::string_view source, const Ring& ring) {
  Cursor cur(tokenize(source));
  MultiPoly p = parse_sum(cur, ring);
  if (!cur.at_end()) cur.fail("end of expression");
  return p;
}

}  // namespace lgtrace::text
