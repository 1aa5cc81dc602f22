#include "lgtrace/smith.hpp"

namespace lgtrace {

namespace {

struct Workspace {
  MatrixPolyUni d, u, v, u_inv, v_inv;

  void swap_rows(Index a, Index b) {
    if (a == b) return;
    d.row(a).swap(d.row(b));
    u.row(a).swap(u.row(b));
    u_inv.col(a).swap(u_inv.col(b));
  }
  void swap_cols(Index a, Index b) {
    if (a == b) return;
    d.col(a).swap(d.col(b));
    v.col(a).swap(v.col(b));
    v_inv.row(a).swap(v_inv.row(b));
  }
  // row_i += q * row_t
  void add_row(Index i, Index t, const PolyUni& q) {
    for (Index j = 0; j < d.cols(); ++j)
      if (!d(t, j).is_zero()) d(i, j) += q * d(t, j);
    for (Index j = 0; j < u.cols(); ++j)
      if (!u(t, j).is_zero()) u(i, j) += q * u(t, j);
    for (Index k = 0; k < u_inv.rows(); ++k)
      if (!u_inv(k, i).is_zero()) u_inv(k, t) -= q * u_inv(k, i);
  }
  // col_j += q * col_t
  void add_col(Index j, Index t, const PolyUni& q) {
    for (Index i = 0; i < d.rows(); ++i)
      if (!d(i, t).is_zero()) d(i, j) += q * d(i, t);
    for (Index i = 0; i < v.rows(); ++i)
      if (!v(i, t).is_zero()) v(i, j) += q * v(i, t);
    for (Index k = 0; k < v_inv.cols(); ++k)
      if (!v_inv(j, k).is_zero()) v_inv(t, k) -= q * v_inv(j, k);
  }
  void scale_row(Index t, const Rational& c) {
    const PolyUni pc(c), pinv(Rational(1) / c);
    for (Index j = 0; j < d.cols(); ++j) d(t, j) *= pc;
    for (Index j = 0; j < u.cols(); ++j) u(t, j) *= pc;
    for (Index k = 0; k < u_inv.rows(); ++k) u_inv(k, t) *= pinv;
  }
};

}  // namespace

Index SmithForm::rank() const {
  Index r = 0;
  for (Index i = 0; i < std::min(d.rows(), d.cols()); ++i)
    if (!d(i, i).is_zero()) ++r;
  return r;
}

std::vector<PolyUni> SmithForm::invariant_factors() const {
  std::vector<PolyUni> out;
  for (Index i = 0; i < std::min(d.rows(), d.cols()); ++i)
    if (!d(i, i).is_zero()) out.push_back(d(i, i));
  return out;
}

SmithForm smith_normal_form(const MatrixPolyUni& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  Workspace w;
  w.d = m;
  w.u = MatrixPolyUni::Identity(rows, rows);
  w.u_inv = MatrixPolyUni::Identity(rows, rows);
  w.v = MatrixPolyUni::Identity(cols, cols);
  w.v_inv = MatrixPolyUni::Identity(cols, cols);

  for (Index t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      Index pr = -1, pc = -1;
      for (Index i = t; i < rows; ++i)
        for (Index j = t; j < cols; ++j) {
          if (w.d(i, j).is_zero()) continue;
          if (pr < 0 || w.d(i, j).degree() < w.d(pr, pc).degree()) {
            pr = i;
            pc = j;
          }
        }
      if (pr < 0) break;
      w.swap_rows(t, pr);
      w.swap_cols(t, pc);

      bool dirty = false;
      const PolyUni pivot = w.d(t, t);
      for (Index i = t + 1; i < rows; ++i) {
        if (w.d(i, t).is_zero()) continue;
        auto [q, r] = PolyUni::divmod(w.d(i, t), pivot);
        w.add_row(i, t, -q);
        dirty = dirty || !r.is_zero();
      }
      for (Index j = t + 1; j < cols; ++j) {
        if (w.d(t, j).is_zero()) continue;
        auto [q, r] = PolyUni::divmod(w.d(t, j), pivot);
        w.add_col(j, t, -q);
        dirty = dirty || !r.is_zero();
      }
      if (dirty) continue;

      // Pivot row and column are clear; enforce divisibility of the rest.
      Index bad = -1;
      for (Index i = t + 1; i < rows && bad < 0; ++i)
        for (Index j = t + 1; j < cols; ++j)
          if (!PolyUni::divmod(w.d(i, j), pivot).second.is_zero()) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      w.add_row(t, bad, PolyUni(1));
    }
    if (t < rows && t < cols && !w.d(t, t).is_zero()) {
      const Rational lc = w.d(t, t).leading();
      if (lc != 1) w.scale_row(t, Rational(1) / lc);
    }
  }
  return SmithForm{std::move(w.u), std::move(w.d), std::move(w.v), std::move(w.u_inv),
                   std::move(w.v_inv)};
}

MatrixPolyUni evaluate(const MatrixPolyUni& m, const Rational& x) {
  MatrixPolyUni out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = PolyUni(m(i, j).evaluate(x));
  return out;
}

Rational determinant_at(const MatrixPolyUni& m, const Rational& x) {
  MatrixQ q(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) q(i, j) = m(i, j).evaluate(x);
  return determinant(q);
}

}  // namespace lgtrace
