#pragma once

// Exact dense linear algebra over the rationals.
//
// Matrices are plain Eigen matrices templated on a field scalar; every
// routine here is a free function that works for any exact field type with
// Eigen NumTraits (in practice `Rational`). Pivot choice is always "first
// nonzero entry in scan order", never magnitude based, so results are
// reproducible and no tolerance is involved.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace lgtrace {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;
using Index = Eigen::Index;

/// "p/q" or "p" for integers.
inline std::string to_string(const Rational& q) { return q.str(); }

/// Parses "p", "-p" or "p/q"; throws InvalidArgument on malformed input.
Rational parse_rational(const std::string& text);

/// Result of Gauss-Jordan elimination. `transform * input == reduced`.
template <typename Scalar>
struct Rref {
  Matrix<Scalar> reduced;
  Matrix<Scalar> transform;
  std::vector<Index> pivot_cols;
  Index rank = 0;
  /// Columns form a basis of the right kernel of the input.
  Matrix<Scalar> nullspace;
};

namespace detail {

// Row reduction in place. With `reduce` the pivot columns are cleared above
// the pivot too (Gauss-Jordan); rows of `t` receive the same operations.
template <typename Scalar>
void eliminate(Matrix<Scalar>& a, Matrix<Scalar>* t, bool reduce, std::vector<Index>& pivots) {
  const Index rows = a.rows();
  const Index cols = a.cols();
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index p = r;
    while (p < rows && a(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      a.row(p).swap(a.row(r));
      if (t) t->row(p).swap(t->row(r));
    }
    if (a(r, c) != 1) {
      const Scalar inv = Scalar(1) / a(r, c);
      for (Index j = c; j < cols; ++j)
        if (a(r, j) != 0) a(r, j) *= inv;
      if (t) t->row(r) *= inv;
    }
    std::vector<Index> nz;
    for (Index j = c + 1; j < cols; ++j)
      if (a(r, j) != 0) nz.push_back(j);
    const Index start = reduce ? 0 : r + 1;
    for (Index i = start; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Scalar f = a(i, c);
      a(i, c) = 0;
      for (Index j : nz) a(i, j) -= f * a(r, j);
      if (t) {
        for (Index j = 0; j < t->cols(); ++j)
          if ((*t)(r, j) != 0) (*t)(i, j) -= f * (*t)(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
}

}  // namespace detail

/// Reduced row-echelon form with the accumulated row operations and a
/// kernel basis (one vector per free column, free entry set to 1).
template <typename Scalar>
Rref<Scalar> rref(const Matrix<Scalar>& m, bool with_transform = true) {
  Rref<Scalar> out;
  out.reduced = m;
  if (with_transform) out.transform = Matrix<Scalar>::Identity(m.rows(), m.rows());
  detail::eliminate<Scalar>(out.reduced, with_transform ? &out.transform : nullptr, true,
                            out.pivot_cols);
  out.rank = static_cast<Index>(out.pivot_cols.size());
  const Index cols = m.cols();
  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (Index c : out.pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
  out.nullspace = Matrix<Scalar>::Zero(cols, cols - out.rank);
  Index k = 0;
  for (Index f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    out.nullspace(f, k) = 1;
    for (Index i = 0; i < out.rank; ++i)
      out.nullspace(out.pivot_cols[static_cast<size_t>(i)], k) = -out.reduced(i, f);
    ++k;
  }
  return out;
}

/// Column indices of `m` that form a basis of its column space (first
/// independent columns in order).
template <typename Scalar>
std::vector<Index> independent_columns(const Matrix<Scalar>& m) {
  Matrix<Scalar> a = m;
  std::vector<Index> pivots;
  detail::eliminate<Scalar>(a, nullptr, false, pivots);
  return pivots;
}

template <typename Scalar>
Index rank(const Matrix<Scalar>& m) {
  return static_cast<Index>(independent_columns(m).size());
}

template <typename Scalar>
Matrix<Scalar> kernel(const Matrix<Scalar>& m) {
  return rref(m, false).nullspace;
}

template <typename Scalar>
Matrix<Scalar> select_columns(const Matrix<Scalar>& m, const std::vector<Index>& cols) {
  Matrix<Scalar> out(m.rows(), static_cast<Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = m.col(cols[k]);
  return out;
}

/// A basis (as columns) of the column space of `m`.
template <typename Scalar>
Matrix<Scalar> column_basis(const Matrix<Scalar>& m) {
  return select_columns(m, independent_columns(m));
}

template <typename Scalar>
Matrix<Scalar> hstack(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows() == 0 && a.cols() == 0 ? b.rows() : a.rows(), a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

/// Some x with a*x == b, or nullopt when b is not in the column space.
template <typename Scalar>
std::optional<Vector<Scalar>> solve(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  Matrix<Scalar> aug(a.rows(), a.cols() + 1);
  if (a.cols() > 0) aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const auto r = rref(aug, false);
  Vector<Scalar> x = Vector<Scalar>::Zero(a.cols());
  for (Index i = 0; i < r.rank; ++i) {
    const Index c = r.pivot_cols[static_cast<size_t>(i)];
    if (c == a.cols()) return std::nullopt;
    x(c) = r.reduced(i, a.cols());
  }
  return x;
}

/// Basis of span(a) ∩ span(b) for column-basis matrices a, b.
template <typename Scalar>
Matrix<Scalar> intersection(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() == 0 || b.cols() == 0) return Matrix<Scalar>::Zero(a.rows(), 0);
  const Matrix<Scalar> stacked = hstack<Scalar>(a, -b);
  const Matrix<Scalar> ker = kernel(stacked);
  return column_basis<Scalar>(a * ker.topRows(a.cols()));
}

/// Columns of `candidates` extending span(base) greedily, in order. The
/// returned columns together with `base` are independent.
template <typename Scalar>
Matrix<Scalar> complement_columns(const Matrix<Scalar>& base, const Matrix<Scalar>& candidates) {
  const Matrix<Scalar> all = hstack(base, candidates);
  std::vector<Index> picked;
  for (Index c : independent_columns(all))
    if (c >= base.cols()) picked.push_back(c);
  return select_columns(all, picked);
}

/// Linear map that sends v in span(base) + span(reps) to its coordinates on
/// `reps`, killing span(base). Columns of [base | reps] must be independent.
template <typename Scalar>
Matrix<Scalar> quotient_projector(const Matrix<Scalar>& base, const Matrix<Scalar>& reps) {
  const Index n = base.rows() > 0 ? base.rows() : reps.rows();
  const Matrix<Scalar> both = hstack(base, reps);
  // Extend to a basis of the ambient space, invert, keep the rep rows.
  const Matrix<Scalar> full =
      hstack<Scalar>(both, complement_columns<Scalar>(both, Matrix<Scalar>::Identity(n, n)));
  const auto r = rref<Scalar>(full, true);
  return r.transform.block(base.cols(), 0, reps.cols(), n);
}

/// a * b, skipping zero entries of a. Exact scalars pay full price for
/// multiplying by zero, and the matrices here are mostly zeros.
template <typename Scalar>
Matrix<Scalar> sparse_product(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(a.rows(), b.cols());
  for (Index k = 0; k < a.cols(); ++k) {
    std::vector<Index> nz;
    for (Index j = 0; j < b.cols(); ++j)
      if (b(k, j) != 0) nz.push_back(j);
    if (nz.empty()) continue;
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, k) == 0) continue;
      for (Index j : nz) out(i, j) += a(i, k) * b(k, j);
    }
  }
  return out;
}

/// Exact determinant by elimination over a field.
template <typename Scalar>
Scalar determinant(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols()) return Scalar(0);
  Matrix<Scalar> a = m;
  Scalar det = 1;
  const Index n = a.rows();
  for (Index c = 0; c < n; ++c) {
    Index p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      a.row(p).swap(a.row(c));
      det = -det;
    }
    det *= a(c, c);
    for (Index i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      const Scalar f = a(i, c) / a(c, c);
      for (Index j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

}  // namespace lgtrace
