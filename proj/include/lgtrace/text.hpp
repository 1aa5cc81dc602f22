#pragma once

// Tokenizer and polynomial expression parser shared by the problem-file
// reader. Polynomials: identifiers are variables, `^` takes a nonnegative
// integer exponent, `*` may be omitted between factors, and `p/q` denotes a
// rational coefficient. `#` starts a comment running to the end of the line.

#include "lgtrace/multipoly.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lgtrace::text {

enum class TokenKind { identifier, number, symbol, end };

struct Token {
  TokenKind kind;
  std::string text;
  int line;
  int column;
};

/// Throws SyntaxError on characters outside the grammar.
std::vector<Token> tokenize(std::string_view source);

class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(size_t ahead = 0) const;
  Token next();
  bool at_symbol(std::string_view s) const;
  bool at_end() const { return peek().kind == TokenKind::end; }
  /// Consumes the symbol if present.
  bool accept(std::string_view symbol);
  Token expect_symbol(std::string_view symbol);
  Token expect_identifier(std::string_view what = "identifier");
  Token expect_number();
  /// Optional sign, integer, optional "/integer".
  Rational expect_rational();
  int expect_integer();
  [[noreturn]] void fail(const std::string& expected) const;

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

/// Parses one polynomial expression, stopping before any token that cannot
/// continue it. Unknown identifiers raise SemanticError.
MultiPoly parse_polynomial(Cursor& cursor, const Ring& ring);

/// Whole-string variant; trailing input is a SyntaxError.
MultiPoly parse_polynomial(std::string_view source, const Ring& ring);

}  // namespace lgtrace::text
