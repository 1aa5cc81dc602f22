#pragma once

#include "lgtrace/exact.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace lgtrace {

/// Exponent vector with trailing zeros removed, so the same monomial has one
/// representation regardless of how many variables the ring has.
using Monomial = std::vector<int>;

enum class MonomialOrder { degrevlex, lex, grlex };

MonomialOrder parse_order(const std::string& name);
std::string to_string(MonomialOrder order);

namespace mono {

inline int exponent(const Monomial& m, size_t i) { return i < m.size() ? m[i] : 0; }
int degree(const Monomial& m);
Monomial multiply(const Monomial& a, const Monomial& b);
/// a | b
bool divides(const Monomial& a, const Monomial& b);
/// b / a, requires divides(a, b).
Monomial divide(const Monomial& b, const Monomial& a);
Monomial lcm(const Monomial& a, const Monomial& b);
bool coprime(const Monomial& a, const Monomial& b);
Monomial variable(size_t i, int power = 1);
void trim(Monomial& m);
/// Strict "a < b" in the given order.
bool less(const Monomial& a, const Monomial& b, MonomialOrder order);

}  // namespace mono

/// Variable names plus the monomial order used for leading terms.
struct Ring {
  std::vector<std::string> vars;
  MonomialOrder order = MonomialOrder::degrevlex;

  size_t size() const { return vars.size(); }
  /// Index of a variable name, or -1.
  int index_of(const std::string& name) const;
  std::string monomial_string(const Monomial& m) const;
};

/// Sparse multivariate polynomial over the rationals. Zero coefficients are
/// never stored.
class MultiPoly {
 public:
  using Terms = std::map<Monomial, Rational>;

  MultiPoly() = default;
  MultiPoly(int c) : MultiPoly(Rational(c)) {}  // NOLINT: Eigen needs Scalar(0)
  MultiPoly(const Rational& c);                 // NOLINT
  MultiPoly(Monomial m, const Rational& c);

  static MultiPoly variable(size_t i) { return MultiPoly(mono::variable(i), 1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational coeff(const Monomial& m) const;
  /// -1 for zero.
  int total_degree() const;
  /// Highest variable index used plus one.
  size_t variable_span() const;

  Monomial leading_monomial(MonomialOrder order) const;
  Rational leading_coeff(MonomialOrder order) const;
  MultiPoly monic(MonomialOrder order) const;

  MultiPoly derivative(size_t var) const;
  /// All terms with total degree <= bound.
  MultiPoly truncate(int bound) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);
  /// Adds c * m * o.
  void add_scaled(const Rational& c, const Monomial& m, const MultiPoly& o);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator-(const MultiPoly& a);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  /// Canonical text, terms in decreasing order; reparses to the same value.
  std::string to_string(const Ring& ring) const;

 private:
  Terms terms_;
};

using MatrixPoly = Matrix<MultiPoly>;

MultiPoly pow(const MultiPoly& p, int e);

/// Variables print as x1, x2, ...
inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) {
  return os << p.to_string(Ring{});
}

}  // namespace lgtrace

namespace Eigen {
template <>
struct NumTraits<lgtrace::MultiPoly> : GenericNumTraits<lgtrace::MultiPoly> {
  using Real = lgtrace::MultiPoly;
  using NonInteger = lgtrace::MultiPoly;
  using Literal = lgtrace::MultiPoly;
  using Nested = lgtrace::MultiPoly;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 20,
    MulCost = 40
  };
  // Only consulted by stream output; exact types have no rounding.
  static inline int digits10() { return 0; }
  static inline int max_digits10() { return 0; }
};
}  // namespace Eigen
