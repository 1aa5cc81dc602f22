#pragma once

#include "lgtrace/poly_uni.hpp"

namespace lgtrace {

/// Smith normal form over Q[x]: u * input * v == d. `u_inv` and `v_inv` are
/// the exact inverses of u and v (both unimodular, constant nonzero
/// determinant). Diagonal entries are monic, divide each other in order, and
/// any zeros come last.
struct SmithForm {
  MatrixPolyUni u;
  MatrixPolyUni d;
  MatrixPolyUni v;
  MatrixPolyUni u_inv;
  MatrixPolyUni v_inv;

  /// Number of nonzero diagonal entries.
  Index rank() const;
  /// Nonzero diagonal entries in order.
  std::vector<PolyUni> invariant_factors() const;
};

/// Pivot rule: nonzero entry of least degree in the active block, ties to
/// the lowest (row, col).
SmithForm smith_normal_form(const MatrixPolyUni& m);

/// Determinant of the matrix evaluated at x.
Rational determinant_at(const MatrixPolyUni& m, const Rational& x);

MatrixPolyUni evaluate(const MatrixPolyUni& m, const Rational& x);

}  // namespace lgtrace
