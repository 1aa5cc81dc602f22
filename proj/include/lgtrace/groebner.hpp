#pragma once

#include "lgtrace/multipoly.hpp"

#include <vector>

namespace lgtrace {

/// Reduced, monic Groebner basis, sorted by increasing leading monomial.
///
/// `cofactors[k]` expresses `generators[k]` in terms of the original input:
/// generators[k] == sum_j cofactors[k][j] * input[j].
struct GroebnerBasis {
  std::vector<MultiPoly> generators;
  MonomialOrder order = MonomialOrder::degrevlex;
  /// Number of ring variables; needed to decide zero-dimensionality.
  size_t variables = 0;
  std::vector<MultiPoly> input;
  std::vector<std::vector<MultiPoly>> cofactors;

  std::vector<Monomial> leading_monomials() const;
};

/// Buchberger with the Gebauer-Moeller pair criteria and the normal
/// selection strategy. `variables` defaults to the largest index in use.
GroebnerBasis buchberger(const std::vector<MultiPoly>& generators,
                         MonomialOrder order = MonomialOrder::degrevlex, size_t variables = 0);

struct Division {
  std::vector<MultiPoly> quotients;
  MultiPoly remainder;
};

/// Multivariate division: f == sum quotients[k] * divisors[k] + remainder,
/// with no term of the remainder divisible by a leading term of a divisor.
/// Divisors are tried in order.
Division divide(const MultiPoly& f, const std::vector<MultiPoly>& divisors, MonomialOrder order);

MultiPoly normal_form(const MultiPoly& f, const GroebnerBasis& gb);

/// Monomials outside the leading-term ideal, increasing in the basis order.
/// Throws NotZeroDimensional when some variable has no pure power among the
/// leading monomials.
std::vector<Monomial> standard_monomials(const GroebnerBasis& gb);

/// Cofactors c with f == sum c[j] * generators[j]. Throws NotInIdeal.
std::vector<MultiPoly> lift_membership(const MultiPoly& f, const std::vector<MultiPoly>& generators,
                                       MonomialOrder order = MonomialOrder::degrevlex);

}  // namespace lgtrace
