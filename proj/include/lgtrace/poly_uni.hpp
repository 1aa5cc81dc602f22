#pragma once

#include "lgtrace/exact.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace lgtrace {

/// Univariate polynomial over the rationals, lowest degree first. The zero
/// polynomial has no coefficients; otherwise the last coefficient is nonzero.
class PolyUni {
 public:
  PolyUni() = default;
  PolyUni(int c) : PolyUni(Rational(c)) {}  // NOLINT: Eigen needs Scalar(0)
  PolyUni(const Rational& c);               // NOLINT
  explicit PolyUni(std::vector<Rational> coeffs);

  static PolyUni monomial(int degree, const Rational& c = 1);

  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int k) const;
  Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }
  bool is_constant() const { return degree() <= 0; }

  PolyUni monic() const;
  Rational evaluate(const Rational& x) const;

  PolyUni& operator+=(const PolyUni& o);
  PolyUni& operator-=(const PolyUni& o);
  PolyUni& operator*=(const PolyUni& o);

  friend PolyUni operator+(PolyUni a, const PolyUni& b) { return a += b; }
  friend PolyUni operator-(PolyUni a, const PolyUni& b) { return a -= b; }
  friend PolyUni operator*(PolyUni a, const PolyUni& b) { return a *= b; }
  friend PolyUni operator-(const PolyUni& a);
  /// Exact quotient; throws InvalidArgument if the division leaves a remainder.
  friend PolyUni operator/(const PolyUni& a, const PolyUni& b);
  PolyUni& operator/=(const PolyUni& o) { return *this = *this / o; }
  friend bool operator==(const PolyUni& a, const PolyUni& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const PolyUni& a, const PolyUni& b) { return !(a == b); }

  /// Euclidean division: a = q*b + r with deg r < deg b.
  static std::pair<PolyUni, PolyUni> divmod(const PolyUni& a, const PolyUni& b);

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Monic gcd (zero if both inputs are zero).
PolyUni gcd(PolyUni a, PolyUni b);

using MatrixPolyUni = Matrix<PolyUni>;

inline std::ostream& operator<<(std::ostream& os, const PolyUni& p) {
  return os << p.to_string("x");
}

}  // namespace lgtrace

namespace Eigen {
template <>
struct NumTraits<lgtrace::PolyUni> : GenericNumTraits<lgtrace::PolyUni> {
  using Real = lgtrace::PolyUni;
  using NonInteger = lgtrace::PolyUni;
  using Literal = lgtrace::PolyUni;
  using Nested = lgtrace::PolyUni;
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
