#include "lgtrace/gradedpair.hpp"

#include "lgtrace/error.hpp"

#include <bit>

namespace lgtrace {

std::vector<Subset> exterior_basis(int n, int k) {
  std::vector<Subset> out;
  if (k < 0 || k > n) return out;
  // Sorted index lists in lexicographic order.
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    Subset s = 0;
    for (int i : idx) s |= Subset{1} << i;
    out.push_back(s);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i - 1)] + 1;
  }
  return out;
}

int wedge_sign(Subset a, Subset b) {
  if (a & b) return 0;
  // Each element of b passes every larger element of a.
  int swaps = 0;
  for (Subset rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return swaps % 2 == 0 ? 1 : -1;
}

Exterior Exterior::unit(int generators) { return basis(generators, 0); }

Exterior Exterior::basis(int generators, Subset s, const Rational& c) {
  Exterior e(generators);
  if (c != 0) e.terms_[s] = c;
  return e;
}

Exterior Exterior::product(int generators, const std::vector<int>& indices) {
  Exterior e = unit(generators);
  for (int i : indices) e = wedge(e, basis(generators, Subset{1} << i));
  return e;
}

std::optional<int> Exterior::degree() const {
  std::optional<int> d;
  for (const auto& [s, c] : terms_) {
    const int k = std::popcount(s);
    if (d && *d != k) return std::nullopt;
    d = k;
  }
  return d;
}

Rational Exterior::coeff(Subset s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Rational(0) : it->second;
}

VectorQ Exterior::coordinates(int k) const {
  const auto b = exterior_basis(n_, k);
  VectorQ v(static_cast<Index>(b.size()));
  for (size_t i = 0; i < b.size(); ++i) v(static_cast<Index>(i)) = coeff(b[i]);
  return v;
}

Exterior& Exterior::operator+=(const Exterior& o) {
  if (o.n_ != n_) throw InvalidArgument("exterior algebras of different rank");
  for (const auto& [s, c] : o.terms_) {
    Rational& x = terms_[s];
    x += c;
    if (x == 0) terms_.erase(s);
  }
  return *this;
}

Exterior& Exterior::operator*=(const Rational& c) {
  if (c == 0) terms_.clear();
  for (auto& [s, x] : terms_) x *= c;
  return *this;
}

Exterior wedge(const Exterior& a, const Exterior& b) {
  if (a.generators() != b.generators()) throw InvalidArgument("exterior algebras of different rank");
  Exterior out(a.generators());
  for (const auto& [sa, ca] : a.terms())
    for (const auto& [sb, cb] : b.terms()) {
      const int sign = wedge_sign(sa, sb);
      if (sign == 0) continue;
      out += Exterior::basis(a.generators(), sa | sb, sign * ca * cb);
    }
  return out;
}

Exterior interior(int generator, const Exterior& form) {
  Exterior out(form.generators());
  const Subset bit = Subset{1} << generator;
  for (const auto& [s, c] : form.terms()) {
    if (!(s & bit)) continue;
    const int before = std::popcount(s & (bit - 1));
    out += Exterior::basis(form.generators(), s & ~bit, before % 2 == 0 ? c : Rational(-c));
  }
  return out;
}

Exterior contract(const Exterior& form, const Exterior& polyvector) {
  Exterior out(form.generators());
  for (const auto& [s, c] : polyvector.terms()) {
    Exterior piece = form;
    for (Subset rest = s; rest; rest &= rest - 1) piece = interior(std::countr_zero(rest), piece);
    out += c * piece;
  }
  return out;
}

Rational reduced_contraction(const Exterior& form, const Exterior& polyvector) {
  return contract(form, polyvector).coeff(0);
}

// ---------------------------------------------------------------------------

Index GradedSpace::total() const {
  Index n = 0;
  for (const auto& [deg, d] : dims) n += d;
  return n;
}

Rational ev_q(int i, const VectorQ& v, int j, const VectorQ& w, Grading g) {
  const bool match = g == Grading::mod2 ? ((i + j) % 2 == 0) : (i + j == 0);
  if (!match) return 0;
  if (v.size() != w.size()) throw InvalidArgument("ev_q: dimension mismatch");
  const Rational pairing = v.size() == 0 ? Rational(0) : Rational(w.dot(v));
  return koszul_sign(i, 1) * pairing;
}

MatrixQ ev_matrix(const GradedSpace& q) {
  const Index n = q.total();
  // Dual components (Q^∨)^j = (Q^{-j})^*, ordered by increasing j.
  std::map<int, std::pair<int, Index>> dual;  // j -> (i, dim)
  for (const auto& [i, d] : q.dims) dual[q.dual_degree(i)] = {i, d};
  std::map<int, Index> dual_offset;
  Index off = 0;
  for (const auto& [j, id] : dual) {
    dual_offset[id.first] = off;
    off += id.second;
  }
  MatrixQ m = MatrixQ::Zero(n, n);
  Index row = 0;
  for (const auto& [i, d] : q.dims) {
    const int j = q.dual_degree(i);
    for (Index k = 0; k < d; ++k) {
      VectorQ v = VectorQ::Zero(d), w = VectorQ::Zero(d);
      v(k) = 1;
      for (Index l = 0; l < d; ++l) {
        w.setZero();
        w(l) = 1;
        m(row + k, dual_offset[i] + l) = ev_q(i, v, j, w, q.grading);
      }
    }
    row += d;
  }
  return m;
}

FormComponent serre_pair(const TriGraded& a, const TriGraded& b, Grading g) {
  FormComponent out;
  out.p = a.p + b.p;
  out.q = a.q + b.q;
  out.form = Exterior(a.form.generators());
  const bool match = g == Grading::mod2 ? ((a.degree + b.degree) % 2 == 0) : (a.degree + b.degree == 0);
  if (!match) return out;
  const Rational pairing = a.value.size() == 0 ? Rational(0) : Rational(b.value.dot(a.value));
  const int sign = koszul_sign(a.degree, b.p + b.q + 1);
  out.form = (sign * pairing) * wedge(a.form, b.form);
  return out;
}

ContractionCheck reduced_contraction_identity_check(int d, const Exterior& omega,
                                                    const Exterior& v1, const Exterior& v2) {
  if (omega.generators() != d || v1.generators() != d || v2.generators() != d)
    throw InvalidArgument("contraction check: all elements must live on d generators");
  const auto top = omega.degree();
  if (!omega.is_zero() && top != d) throw InvalidArgument("contraction check: Ω must be a top form");
  const auto k1 = v1.degree(), k2 = v2.degree();
  if ((!v1.is_zero() && !k1) || (!v2.is_zero() && !k2))
    throw InvalidArgument("contraction check: v1 and v2 must be homogeneous");

  ContractionCheck c;
  c.lhs = reduced_contraction(omega, wedge(v1, v2));
  if (!v1.is_zero() && !v2.is_zero()) {
    // v1 sits in degree -k1 of ΛTX; Ω ⌟ v2 sits in degree d - k2 of ΛT*X.
    // The dual pairing w(v) of a form with a polyvector of equal degree is
    // their full contraction.
    const Exterior alpha = contract(omega, v2);
    const int i = -*k1, j = d - *k2;
    VectorQ v(1), w(1);
    v(0) = 1;
    w(0) = i + j == 0 ? reduced_contraction(alpha, v1) : Rational(0);
    c.rhs = koszul_sign(*k1, d) * ev_q(i, v, j, w);
  }
  c.holds = c.lhs == c.rhs;
  return c;
}

}  // namespace lgtrace
