#include "lgtrace/bulk.hpp"

#include "lgtrace/error.hpp"
#include "lgtrace/gradedpair.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <tuple>

namespace lgtrace {

LGPair::LGPair(Ring r, MultiPoly w) : ring(std::move(r)), potential(std::move(w)) {
  if (potential.is_constant()) throw InvalidArgument("potential must be non-constant");
  if (potential.variable_span() > ring.size())
    throw InvalidArgument("potential uses more variables than the ring declares");
}

JacobianData jacobian_ideal(const LGPair& pair) {
  JacobianData jd;
  for (size_t i = 0; i < pair.dimension(); ++i) jd.partials.push_back(pair.potential.derivative(i));
  jd.basis = buchberger(jd.partials, pair.ring.order, pair.dimension());
  try {
    standard_monomials(jd.basis);
    jd.zero_dimensional = true;
  } catch (const NotZeroDimensional&) {
    jd.zero_dimensional = false;
  }
  return jd;
}

CriticalLocus critical_locus_finite(const JacobianData& jd) {
  CriticalLocus c;
  try {
    c.milnor_number = standard_monomials(jd.basis).size();
    c.finite = true;
  } catch (const NotZeroDimensional&) {
    c.finite = false;
  }
  return c;
}

MultiPoly expand_determinant(const MatrixPoly& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("determinant of a non-square matrix");
  const Index n = m.rows();
  if (n == 0) return MultiPoly(1);
  if (n == 1) return m(0, 0);
  MultiPoly det;
  for (Index j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    MatrixPoly minor(n - 1, n - 1);
    for (Index r = 1; r < n; ++r)
      for (Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    const MultiPoly term = m(0, j) * expand_determinant(minor);
    if (j % 2 == 0) det += term;
    else det -= term;
  }
  return det;
}

MultiPoly hessian(const LGPair& pair) {
  const Index d = static_cast<Index>(pair.dimension());
  MatrixPoly h(d, d);
  for (Index i = 0; i < d; ++i) {
    const MultiPoly di = pair.potential.derivative(static_cast<size_t>(i));
    for (Index j = 0; j < d; ++j) h(i, j) = di.derivative(static_cast<size_t>(j));
  }
  return expand_determinant(h);
}

// ---------------------------------------------------------------------------

MilnorAlgebra::MilnorAlgebra(JacobianData jd) : jd_(std::move(jd)) {
  basis_ = standard_monomials(jd_.basis);
  for (size_t k = 0; k < basis_.size(); ++k) index_[basis_[k]] = k;
  table_.assign(basis_.size(), std::vector<VectorQ>(basis_.size()));
  for (size_t a = 0; a < basis_.size(); ++a)
    for (size_t b = a; b < basis_.size(); ++b) {
      table_[a][b] = coordinates(MultiPoly(mono::multiply(basis_[a], basis_[b]), 1));
      table_[b][a] = table_[a][b];
    }
}

VectorQ MilnorAlgebra::coordinates(const MultiPoly& f) const {
  VectorQ v = VectorQ::Zero(static_cast<Index>(basis_.size()));
  const MultiPoly nf = reduce(f);
  for (const auto& [m, c] : nf.terms()) {
    auto it = index_.find(m);
    // A normal form only contains standard monomials.
    if (it == index_.end()) throw PreconditionFailed("normal form left a non-standard monomial");
    v(static_cast<Index>(it->second)) = c;
  }
  return v;
}

MultiPoly MilnorAlgebra::element(const VectorQ& coords) const {
  MultiPoly f;
  for (Index k = 0; k < coords.size(); ++k)
    if (coords(k) != 0) f += MultiPoly(basis_[static_cast<size_t>(k)], coords(k));
  return f;
}

VectorQ MilnorAlgebra::multiply(const VectorQ& u, const VectorQ& v) const {
  VectorQ out = VectorQ::Zero(static_cast<Index>(basis_.size()));
  for (Index a = 0; a < u.size(); ++a) {
    if (u(a) == 0) continue;
    for (Index b = 0; b < v.size(); ++b)
      if (v(b) != 0) out += (u(a) * v(b)) * table_[static_cast<size_t>(a)][static_cast<size_t>(b)];
  }
  return out;
}

VectorQ MilnorAlgebra::unit() const { return coordinates(MultiPoly(1)); }

bool MilnorAlgebra::is_commutative() const {
  for (size_t a = 0; a < basis_.size(); ++a)
    for (size_t b = 0; b < basis_.size(); ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

bool MilnorAlgebra::is_associative() const {
  const Index n = static_cast<Index>(basis_.size());
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c) {
        const VectorQ ea = VectorQ::Unit(n, a), eb = VectorQ::Unit(n, b), ec = VectorQ::Unit(n, c);
        if (multiply(multiply(ea, eb), ec) != multiply(ea, multiply(eb, ec))) return false;
      }
  return true;
}

bool MilnorAlgebra::has_unit() const {
  const VectorQ one = unit();
  const Index n = static_cast<Index>(basis_.size());
  for (Index a = 0; a < n; ++a) {
    const VectorQ e = VectorQ::Unit(n, a);
    if (multiply(one, e) != e || multiply(e, one) != e) return false;
  }
  return true;
}

MilnorAlgebra milnor_algebra(const JacobianData& jd) { return MilnorAlgebra(jd); }

// ---------------------------------------------------------------------------
// Koszul complex

namespace {

int weighted_degree(const Monomial& m, const std::vector<int>& w) {
  int s = 0;
  for (size_t i = 0; i < m.size(); ++i) s += m[i] * w[i];
  return s;
}

/// All monomials in `vars` variables of weighted degree at most `bound`.
std::vector<Monomial> monomials_up_to(size_t vars, const std::vector<int>& w, int bound) {
  std::vector<Monomial> out;
  if (bound < 0) return out;
  Monomial cur(vars, 0);
  auto rec = [&](auto&& self, size_t i, int left) -> void {
    if (i == vars) {
      Monomial m = cur;
      mono::trim(m);
      out.push_back(m);
      return;
    }
    for (int e = 0; e * w[i] <= left; ++e) {
      cur[i] = e;
      self(self, i + 1, left - e * w[i]);
    }
    cur[i] = 0;
  };
  rec(rec, 0, bound);
  return out;
}

struct KoszulTerm {
  Monomial coeff;
  Subset wedge;
  bool operator<(const KoszulTerm& o) const {
    return std::tie(wedge, coeff) < std::tie(o.wedge, o.coeff);
  }
};

int popcount(Subset s) { return std::popcount(s); }

/// Basis of Λ^k with coefficient weight cut so that contraction with dW stays
/// inside the truncation: weight(f ∂_I) = wdeg f - w(I) + k D ≤ B.
std::vector<KoszulTerm> koszul_basis(size_t d, int k, const std::vector<int>& w, int top, int bound) {
  std::vector<KoszulTerm> out;
  for (Subset s = 0; s < (Subset{1} << d); ++s) {
    if (popcount(s) != k) continue;
    int ws = 0;
    for (size_t i = 0; i < d; ++i)
      if (s & (Subset{1} << i)) ws += w[i];
    for (auto& m : monomials_up_to(d, w, bound - k * top + ws)) out.push_back({m, s});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Sum of the ranks of the diagonal blocks when `label` splits the map.
Index blockwise_rank(const MatrixQ& m, const std::vector<int>& row_label, const std::vector<int>& col_label,
                     bool split) {
  if (!split) return rank<Rational>(m);
  std::map<int, std::pair<std::vector<Index>, std::vector<Index>>> groups;
  for (Index r = 0; r < m.rows(); ++r) groups[row_label[static_cast<size_t>(r)]].first.push_back(r);
  for (Index c = 0; c < m.cols(); ++c) groups[col_label[static_cast<size_t>(c)]].second.push_back(c);
  Index total = 0;
  for (const auto& [label, rc] : groups) {
    const auto& [rows, cols] = rc;
    if (rows.empty() || cols.empty()) continue;
    MatrixQ block(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols.size(); ++j) block(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    total += rank<Rational>(block);
  }
  return total;
}

}  // namespace

std::vector<int> grading_weights(const LGPair& pair) {
  const size_t d = pair.dimension();
  std::vector<int> ones(d, 1);
  const auto& terms = pair.potential.terms();
  std::vector<Monomial> mons;
  for (const auto& [m, c] : terms) mons.push_back(m);
  MatrixQ rows = MatrixQ::Zero(static_cast<Index>(mons.size()), static_cast<Index>(d));
  for (size_t r = 1; r < mons.size(); ++r)
    for (size_t i = 0; i < d; ++i)
      rows(static_cast<Index>(r), static_cast<Index>(i)) = mono::exponent(mons[r], i) - mono::exponent(mons[0], i);
  VectorQ one = VectorQ::Ones(static_cast<Index>(d));
  if ((rows * one).isZero()) return ones;
  const MatrixQ k = kernel<Rational>(rows);
  if (k.cols() != 1) return ones;
  VectorQ v = k.col(0);
  if (v(0) < 0) v = -v;
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) <= 0) return ones;
  // Clear denominators, then divide out the common factor.
  using boost::multiprecision::mpz_int;
  mpz_int den = 1;
  for (Index i = 0; i < v.size(); ++i) {
    const mpz_int q = boost::multiprecision::denominator(v(i));
    den = den / mpz_int(boost::multiprecision::gcd(den, q)) * q;
  }
  std::vector<mpz_int> ints;
  mpz_int g = 0;
  for (Index i = 0; i < v.size(); ++i) {
    ints.push_back(boost::multiprecision::numerator(v(i) * Rational(den)));
    g = boost::multiprecision::gcd(g, ints.back());
  }
  std::vector<int> w;
  for (const auto& x : ints) w.push_back(static_cast<int>(mpz_int(x / g)));
  return w;
}

KoszulComplex koszul_complex(const LGPair& pair, int bound) {
  const size_t d = pair.dimension();
  KoszulComplex kc;
  kc.weights = grading_weights(pair);
  kc.graded = true;
  for (const auto& [m, c] : pair.potential.terms()) {
    const int wd = weighted_degree(m, kc.weights);
    if (kc.top != 0 && wd != kc.top) kc.graded = false;
    kc.top = std::max(kc.top, wd);
  }
  const int cut = bound * *std::min_element(kc.weights.begin(), kc.weights.end());
  std::vector<std::vector<KoszulTerm>> bases(d + 1);
  kc.bases.resize(d + 1);
  kc.labels.resize(d + 1);
  for (size_t k = 0; k <= d; ++k) {
    bases[k] = koszul_basis(d, static_cast<int>(k), kc.weights, kc.top, cut);
    for (const auto& t : bases[k]) {
      int ws = 0;
      for (size_t i = 0; i < d; ++i)
        if (t.wedge & (Subset{1} << i)) ws += kc.weights[i];
      kc.bases[k].push_back({t.coeff, t.wedge});
      kc.labels[k].push_back(weighted_degree(t.coeff, kc.weights) - ws + static_cast<int>(k) * kc.top);
    }
  }

  std::vector<MultiPoly> partials;
  for (size_t i = 0; i < d; ++i) partials.push_back(pair.potential.derivative(i));
  // Maps in increasing cohomological degree: Λ^d -> Λ^{d-1} -> ... -> Λ^0.
  std::vector<MatrixQ> maps;
  std::vector<Index> dims;
  for (size_t k = d + 1; k-- > 0;) dims.push_back(static_cast<Index>(bases[k].size()));
  for (size_t k = d; k >= 1; --k) {
    std::map<KoszulTerm, Index> target;
    for (size_t r = 0; r < bases[k - 1].size(); ++r) target[bases[k - 1][r]] = static_cast<Index>(r);
    MatrixQ m = MatrixQ::Zero(static_cast<Index>(bases[k - 1].size()), static_cast<Index>(bases[k].size()));
    for (size_t c = 0; c < bases[k].size(); ++c) {
      const auto& [coeff, s] = bases[k][c];
      // ∂W ⌟ (∂_{i_1} ∧ ... ∧ ∂_{i_k}) = Σ_j (-1)^{j-1} ∂_{i_j}W ∂_{I \ i_j}
      int position = 0;
      for (size_t i = 0; i < d; ++i) {
        const Subset bit = Subset{1} << i;
        if (!(s & bit)) continue;
        const Rational sign = position % 2 == 0 ? 1 : -1;
        ++position;
        for (const auto& [mon, coef] : partials[i].terms()) {
          auto it = target.find(KoszulTerm{mono::multiply(coeff, mon), s & ~bit});
          if (it == target.end()) throw PreconditionFailed("Koszul truncation is not a subcomplex");
          m(it->second, static_cast<Index>(c)) += sign * coef;
        }
      }
    }
    maps.push_back(std::move(m));
  }
  kc.complex = FiniteComplex(-static_cast<int>(d), dims, maps);
  return kc;
}

namespace {

KoszulLevel koszul_level(const LGPair& pair, int bound) {
  const KoszulComplex kc = koszul_complex(pair, bound);
  const int d = static_cast<int>(pair.dimension());
  // rank_in[k] = rank of Λ^{k+1} -> Λ^k
  std::vector<Index> rank_in(static_cast<size_t>(d) + 1, 0);
  for (int k = 0; k < d; ++k)
    rank_in[static_cast<size_t>(k)] =
        blockwise_rank(kc.complex.differential(-k - 1), kc.labels[static_cast<size_t>(k)],
                       kc.labels[static_cast<size_t>(k) + 1], kc.graded);
  KoszulLevel level;
  level.bound = bound;
  for (int k = 0; k <= d; ++k) {
    const Index out = k == 0 ? 0 : rank_in[static_cast<size_t>(k) - 1];
    level.dims[-k] = kc.complex.dim(-k) - out - rank_in[static_cast<size_t>(k)];
  }
  return level;
}

}  // namespace

KoszulReport koszul_cohomology_truncated(const LGPair& pair, int bound) {
  const int deg = pair.potential.total_degree();
  if (bound < deg) throw InvalidArgument("truncation bound must be at least deg W");
  KoszulReport r;
  r.weights = grading_weights(pair);
  r.at_bound = koszul_level(pair, bound);
  r.at_next = koszul_level(pair, bound + deg);
  r.stabilized = r.at_bound.dims == r.at_next.dims;
  return r;
}

// ---------------------------------------------------------------------------
// Traces

TraceBackend parse_backend(const std::string& name) {
  if (name == "residue") return TraceBackend::residue;
  if (name == "socle") return TraceBackend::socle;
  throw InvalidArgument("unknown trace backend '" + name + "'");
}

std::string to_string(TraceBackend b) { return b == TraceBackend::residue ? "residue" : "socle"; }

namespace {

/// Monic minimal polynomial of multiplication by x_i on the Milnor algebra.
PolyUni minimal_polynomial(const MilnorAlgebra& ma, size_t var) {
  const Index n = static_cast<Index>(ma.dimension());
  std::vector<VectorQ> powers{ma.unit()};
  const VectorQ x = ma.coordinates(MultiPoly::variable(var));
  for (Index k = 1; k <= n; ++k) {
    powers.push_back(ma.multiply(powers.back(), x));
    MatrixQ m(n, static_cast<Index>(powers.size()));
    for (size_t c = 0; c < powers.size(); ++c) m.col(static_cast<Index>(c)) = powers[c];
    const MatrixQ ker = kernel<Rational>(m);
    if (ker.cols() == 0) continue;
    // Dependence first appears at the newest power, so its coefficient is nonzero.
    std::vector<Rational> coeffs(powers.size());
    for (size_t c = 0; c < powers.size(); ++c) coeffs[c] = ker(static_cast<Index>(c), 0);
    return PolyUni(coeffs).monic();
  }
  throw PreconditionFailed("no minimal polynomial found");
}

}  // namespace

GlobalResidue::GlobalResidue(const MilnorAlgebra& ma) {
  const auto& partials = ma.jacobian().partials;
  const size_t d = partials.size();
  const MonomialOrder order = ma.jacobian().basis.order;
  MatrixPoly a(static_cast<Index>(d), static_cast<Index>(d));
  for (size_t i = 0; i < d; ++i) {
    minpoly_.push_back(minimal_polynomial(ma, i));
    MultiPoly g;
    const auto& c = minpoly_.back().coeffs();
    for (size_t e = 0; e < c.size(); ++e)
      if (c[e] != 0) g += MultiPoly(mono::variable(i, static_cast<int>(e)), c[e]);
    const auto row = lift_membership(g, partials, order);
    for (size_t j = 0; j < d; ++j) a(static_cast<Index>(i), static_cast<Index>(j)) = row[j];
  }
  det_ = expand_determinant(a);
}

Rational GlobalResidue::operator()(const MultiPoly& f) const {
  // res[h dx / (m_1(x_1) ... m_d(x_d))] for separated denominators factors
  // into univariate total residues, and a univariate total residue of x^e/m
  // is the top coefficient of x^e mod m.
  const size_t d = minpoly_.size();
  std::vector<std::map<int, Rational>> cache(d);
  auto uni = [&](size_t i, int e) -> Rational {
    auto it = cache[i].find(e);
    if (it != cache[i].end()) return it->second;
    const PolyUni& m = minpoly_[i];
    const Rational r = PolyUni::divmod(PolyUni::monomial(e), m).second.coeff(m.degree() - 1) / m.leading();
    cache[i][e] = r;
    return r;
  };
  Rational total = 0;
  const MultiPoly integrand = f * det_;
  for (const auto& [mon, c] : integrand.terms()) {
    Rational t = c;
    for (size_t i = 0; i < d && t != 0; ++i) t *= uni(i, mono::exponent(mon, i));
    total += t;
  }
  return total;
}

Rational BulkTrace::operator()(const VectorQ& coords) const {
  Rational s = 0;
  for (Index k = 0; k < coords.size(); ++k) s += covector(k) * coords(k);
  return s;
}

MatrixQ socle(const MilnorAlgebra& ma) {
  const Index n = static_cast<Index>(ma.dimension());
  const size_t d = ma.jacobian().partials.size();
  // Stack the multiplication matrices of the coordinates.
  MatrixQ stacked(static_cast<Index>(d) * n, n);
  for (size_t i = 0; i < d; ++i) {
    const VectorQ x = ma.coordinates(MultiPoly::variable(i));
    for (Index c = 0; c < n; ++c) stacked.block(static_cast<Index>(i) * n, c, n, 1) = ma.multiply(x, VectorQ::Unit(n, c));
  }
  return kernel<Rational>(stacked);
}

BulkTrace bulk_trace(const MilnorAlgebra& ma, TraceBackend backend, const Rational& scale) {
  BulkTrace tr;
  tr.backend = backend;
  tr.scale = scale;
  const Index n = static_cast<Index>(ma.dimension());
  tr.covector = VectorQ::Zero(n);
  const Rational factor = scale * scale;
  if (backend == TraceBackend::residue) {
    const GlobalResidue res(ma);
    for (Index k = 0; k < n; ++k) tr.covector(k) = factor * res(ma.basis_element(static_cast<size_t>(k)));
    return tr;
  }
  const MatrixQ s = socle(ma);
  if (s.cols() != 1)
    throw PreconditionFailed("socle backend needs a one-dimensional socle, found dimension " +
                             std::to_string(s.cols()));
  // Coordinate functional of the highest basis monomial in the socle
  // generator, normalised to 1 on that generator.
  Index top = n - 1;
  while (top >= 0 && s(top, 0) == 0) --top;
  tr.covector(top) = factor / s(top, 0);
  return tr;
}

BulkGram bulk_gram(const MilnorAlgebra& ma, const BulkTrace& tr) {
  const size_t n = ma.dimension();
  BulkGram g;
  g.gram = MatrixQ(static_cast<Index>(n), static_cast<Index>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) g.gram(static_cast<Index>(a), static_cast<Index>(b)) = tr(ma.product(a, b));
  g.determinant = determinant(g.gram);
  g.nondegenerate = g.determinant != 0;
  return g;
}

}  // namespace lgtrace
