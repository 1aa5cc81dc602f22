#include "lgtrace/boundary.hpp"

#include "lgtrace/error.hpp"
#include "lgtrace/smith.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace lgtrace {

namespace {

MatrixPoly scalar_identity(Index n, const MultiPoly& c) {
  MatrixPoly m = MatrixPoly::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

MatrixPoly kron(const MatrixPoly& a, const MatrixPoly& b) {
  MatrixPoly out = MatrixPoly::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l)
          if (!b(k, l).is_zero()) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

bool is_zero(const MatrixPoly& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

int max_degree(const MatrixPoly& m) {
  int d = -1;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) d = std::max(d, m(i, j).total_degree());
  return d;
}

/// Permutation of basis indices putting the even block after the odd one.
std::vector<Index> swapped_order(const MatrixFactorization& a) {
  std::vector<Index> order;
  for (Index k = a.even_rank(); k < a.rank(); ++k) order.push_back(k);
  for (Index k = 0; k < a.even_rank(); ++k) order.push_back(k);
  return order;
}

}  // namespace

MatrixPoly MatrixFactorization::differential() const {
  const Index r0 = even_rank(), r1 = odd_rank();
  MatrixPoly d = MatrixPoly::Zero(r0 + r1, r0 + r1);
  d.block(0, r0, r0, r1) = g;
  d.block(r0, 0, r1, r0) = f;
  return d;
}

MatrixPoly MatrixFactorization::grading() const {
  MatrixPoly m = MatrixPoly::Zero(rank(), rank());
  for (Index k = 0; k < rank(); ++k) m(k, k) = parity(k) == 0 ? 1 : -1;
  return m;
}

MatrixFactorization mf_validate(const Ring& ring, const MultiPoly& w, MatrixPoly f, MatrixPoly g) {
  if (g.rows() != f.cols() || g.cols() != f.rows())
    throw InvalidArgument("factorization blocks have inconsistent shapes: F is " + std::to_string(f.rows()) +
                          "x" + std::to_string(f.cols()) + ", G is " + std::to_string(g.rows()) + "x" +
                          std::to_string(g.cols()));
  const MatrixPoly gf = sparse_product(g, f), fg = sparse_product(f, g);
  auto check = [&](const MatrixPoly& p, const char* name) {
    for (Index i = 0; i < p.rows(); ++i)
      for (Index j = 0; j < p.cols(); ++j) {
        const MultiPoly expect = i == j ? w : MultiPoly();
        if (p(i, j) != expect)
          throw NotAFactorization(std::string(name) + " entry (" + std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ") is " + p(i, j).to_string(ring) + ", expected " +
                                  expect.to_string(ring));
      }
  };
  check(gf, "G*F");
  check(fg, "F*G");
  return MatrixFactorization{ring, w, std::move(f), std::move(g)};
}

MatrixFactorization tensor_mf(const MatrixFactorization& a, const MatrixFactorization& b) {
  if (a.ring.vars != b.ring.vars) throw InvalidArgument("tensor factors must share a ring");
  const Index na = a.rank(), nb = b.rank();
  const MatrixPoly d = kron(a.differential(), scalar_identity(nb, 1)) + kron(a.grading(), b.differential());
  std::vector<Index> even, odd;
  for (Index i = 0; i < na; ++i)
    for (Index j = 0; j < nb; ++j) ((a.parity(i) + b.parity(j)) % 2 == 0 ? even : odd).push_back(i * nb + j);
  MatrixPoly f(static_cast<Index>(odd.size()), static_cast<Index>(even.size()));
  MatrixPoly g(static_cast<Index>(even.size()), static_cast<Index>(odd.size()));
  for (size_t r = 0; r < odd.size(); ++r)
    for (size_t c = 0; c < even.size(); ++c) f(static_cast<Index>(r), static_cast<Index>(c)) = d(odd[r], even[c]);
  for (size_t r = 0; r < even.size(); ++r)
    for (size_t c = 0; c < odd.size(); ++c) g(static_cast<Index>(r), static_cast<Index>(c)) = d(even[r], odd[c]);
  return mf_validate(a.ring, a.potential + b.potential, std::move(f), std::move(g));
}

MatrixFactorization shift_mf(const MatrixFactorization& a) { return MatrixFactorization{a.ring, a.potential, a.g, a.f}; }

MatrixPoly shift_morphism(const MatrixPoly& s, const MatrixFactorization& source, const MatrixFactorization& target) {
  if (s.rows() != target.rank() || s.cols() != source.rank()) throw InvalidArgument("morphism shape mismatch");
  const auto rows = swapped_order(target), cols = swapped_order(source);
  MatrixPoly out(s.rows(), s.cols());
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = 0; j < s.cols(); ++j) out(i, j) = s(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
  return out;
}

// ---------------------------------------------------------------------------
// Hom complexes

MatrixPoly HomComplex::apply(const MatrixPoly& s, int parity) const {
  MatrixPoly right = sparse_product(s, source.differential());
  if (parity % 2 == 0) right = -right;
  // D2 s - (-1)^κ s D1
  return sparse_product(target.differential(), s) + right;
}

std::vector<MultiPoly> HomComplex::flatten(const MatrixPoly& s, int parity) const {
  std::vector<MultiPoly> v;
  for (const auto& [r, c] : slots[static_cast<size_t>(parity)]) v.push_back(s(r, c));
  return v;
}

MatrixPoly HomComplex::unflatten(const std::vector<MultiPoly>& v, int parity) const {
  MatrixPoly s = MatrixPoly::Zero(target.rank(), source.rank());
  const auto& sl = slots[static_cast<size_t>(parity)];
  for (size_t k = 0; k < sl.size(); ++k) s(sl[k].first, sl[k].second) = v[k];
  return s;
}

bool HomComplex::is_homogeneous(const MatrixPoly& s, int p) const {
  if (s.rows() != target.rank() || s.cols() != source.rank()) return false;
  for (Index i = 0; i < s.rows(); ++i)
    for (Index j = 0; j < s.cols(); ++j)
      if (parity(i, j) != p % 2 && !s(i, j).is_zero()) return false;
  return true;
}

bool HomComplex::is_cocycle(const MatrixPoly& s, int p) const {
  return is_homogeneous(s, p) && is_zero(apply(s, p));
}

HomComplex hom_complex(const MatrixFactorization& source, const MatrixFactorization& target) {
  if (source.potential != target.potential)
    throw MismatchedPotential("factorizations of " + source.potential.to_string(source.ring) + " and " +
                              target.potential.to_string(target.ring));
  HomComplex h{source, target, {}, {}};
  for (Index i = 0; i < target.rank(); ++i)
    for (Index j = 0; j < source.rank(); ++j) h.slots[static_cast<size_t>(h.parity(i, j))].push_back({i, j});
  for (int k = 0; k < 2; ++k) {
    const auto& from = h.slots[static_cast<size_t>(k)];
    const auto& to = h.slots[static_cast<size_t>(1 - k)];
    MatrixPoly m = MatrixPoly::Zero(static_cast<Index>(to.size()), static_cast<Index>(from.size()));
    for (size_t c = 0; c < from.size(); ++c) {
      MatrixPoly e = MatrixPoly::Zero(target.rank(), source.rank());
      e(from[c].first, from[c].second) = 1;
      const auto image = h.flatten(h.apply(e, k), 1 - k);
      for (size_t r = 0; r < image.size(); ++r) m(static_cast<Index>(r), static_cast<Index>(c)) = image[r];
    }
    h.differential[static_cast<size_t>(k)] = std::move(m);
  }
  for (int k = 0; k < 2; ++k)
    if (!is_zero(sparse_product(h.differential[static_cast<size_t>(1 - k)], h.differential[static_cast<size_t>(k)])))
      throw PreconditionFailed("defect differential does not square to zero");
  return h;
}

BackendChoice parse_cohomology_backend(const std::string& name, int truncation) {
  if (name == "snf") return {CohomologyBackend::snf, truncation};
  if (name == "truncate") return {CohomologyBackend::truncate, truncation};
  throw InvalidArgument("unknown cohomology backend '" + name + "'");
}

std::string to_string(CohomologyBackend b) { return b == CohomologyBackend::snf ? "snf" : "truncate"; }

// ---------------------------------------------------------------------------
// Cohomology backends

struct HDFCohomology::Impl {
  virtual ~Impl() = default;
  virtual VectorQ reduce(const MatrixPoly& cocycle, int parity) const = 0;
};

namespace {

PolyUni to_uni(const MultiPoly& p) {
  std::vector<Rational> c;
  for (const auto& [m, x] : p.terms()) {
    const auto e = static_cast<size_t>(mono::exponent(m, 0));
    if (c.size() <= e) c.resize(e + 1);
    c[e] = x;
  }
  return PolyUni(std::move(c));
}

MultiPoly from_uni(const PolyUni& p) {
  MultiPoly out;
  for (int e = 0; e <= p.degree(); ++e)
    if (p.coeff(e) != 0) out += MultiPoly(mono::variable(0, e), p.coeff(e));
  return out;
}

MatrixPolyUni to_uni(const MatrixPoly& m) {
  MatrixPolyUni out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = to_uni(m(i, j));
  return out;
}

/// Univariate backend: ker and im as free modules via Smith forms, then the
/// torsion quotient ⊕ Q[x]/(e_i) read off from a second Smith form.
struct SnfImpl final : HDFCohomology::Impl {
  struct Part {
    MatrixPolyUni kernel_coords;  // k x m: left inverse of the kernel basis on the kernel
    MatrixPolyUni quotient_u;     // U of the Smith form of the boundary presentation
    std::vector<PolyUni> factors;  // invariant factors of positive degree, with their row
    std::vector<Index> factor_rows;
  };
  std::array<Part, 2> parts;
  const HomComplex* complex = nullptr;
  HomComplex owned;

  VectorQ reduce(const MatrixPoly& cocycle, int parity) const override {
    const Part& p = parts[static_cast<size_t>(parity)];
    const auto flat = owned.flatten(cocycle, parity);
    Vector<PolyUni> v(static_cast<Index>(flat.size()));
    for (size_t k = 0; k < flat.size(); ++k) v(static_cast<Index>(k)) = to_uni(flat[k]);
    const Vector<PolyUni> z = sparse_product<PolyUni>(p.kernel_coords, v);
    const Vector<PolyUni> y = sparse_product<PolyUni>(p.quotient_u, z);
    std::vector<Rational> coords;
    for (size_t i = 0; i < p.factors.size(); ++i) {
      const PolyUni r = PolyUni::divmod(y(p.factor_rows[i]), p.factors[i]).second;
      for (int j = 0; j < p.factors[i].degree(); ++j) coords.push_back(r.coeff(j));
    }
    VectorQ out(static_cast<Index>(coords.size()));
    for (size_t k = 0; k < coords.size(); ++k) out(static_cast<Index>(k)) = coords[k];
    return out;
  }
};

/// Monomials of total degree at most `bound` in `vars` variables, in a fixed
/// order, with an index.
struct MonomialTable {
  std::vector<Monomial> list;
  std::map<Monomial, Index> index;

  MonomialTable(size_t vars, int bound) {
    Monomial cur(vars, 0);
    auto rec = [&](auto&& self, size_t i, int left) -> void {
      if (i == vars) {
        Monomial m = cur;
        mono::trim(m);
        index[m] = static_cast<Index>(list.size());
        list.push_back(m);
        return;
      }
      for (int e = 0; e <= left; ++e) {
        cur[i] = e;
        self(self, i + 1, left - e);
      }
      cur[i] = 0;
    };
    if (bound >= 0) rec(rec, 0, bound);
  }
  Index size() const { return static_cast<Index>(list.size()); }
};

/// Truncated backend over any number of variables: cochains with entries of
/// degree ≤ N, boundaries from preimages of degree ≤ N + δ where δ bounds the
/// degrees of D.
struct TruncImpl final : HDFCohomology::Impl {
  HomComplex owned;
  int bound = 0;
  int slack = 0;
  std::array<std::vector<MatrixPoly>, 2> reps;

  /// Coordinates of a flattened cochain on (slot, monomial) at a level.
  static VectorQ coords(const std::vector<MultiPoly>& flat, const MonomialTable& t) {
    VectorQ v = VectorQ::Zero(static_cast<Index>(flat.size()) * t.size());
    for (size_t s = 0; s < flat.size(); ++s)
      for (const auto& [m, c] : flat[s].terms()) {
        auto it = t.index.find(m);
        if (it == t.index.end()) throw PreconditionFailed("cochain exceeds the truncation level");
        v(static_cast<Index>(s) * t.size() + it->second) = c;
      }
    return v;
  }

  /// Matrix of 𝔡 from parity κ at level `from` into coordinates at level `to`.
  MatrixQ image_matrix(int parity, const MonomialTable& from, const MonomialTable& to) const {
    const auto& d = owned.differential[static_cast<size_t>(parity)];
    const Index slots_in = d.cols(), slots_out = d.rows();
    MatrixQ m = MatrixQ::Zero(slots_out * to.size(), slots_in * from.size());
    for (Index s = 0; s < slots_in; ++s)
      for (Index r = 0; r < slots_out; ++r) {
        if (d(r, s).is_zero()) continue;
        for (Index k = 0; k < from.size(); ++k)
          for (const auto& [mon, c] : d(r, s).terms()) {
            auto it = to.index.find(mono::multiply(from.list[static_cast<size_t>(k)], mon));
            if (it == to.index.end()) throw PreconditionFailed("truncation levels too tight");
            m(r * to.size() + it->second, s * from.size() + k) += c;
          }
      }
    return m;
  }

  MatrixPoly cochain(const VectorQ& v, int parity, const MonomialTable& t) const {
    const auto nslots = owned.slots[static_cast<size_t>(parity)].size();
    std::vector<MultiPoly> flat(nslots);
    for (size_t s = 0; s < nslots; ++s)
      for (Index k = 0; k < t.size(); ++k) {
        const Rational& c = v(static_cast<Index>(s) * t.size() + k);
        if (c != 0) flat[s] += MultiPoly(t.list[static_cast<size_t>(k)], c);
      }
    return owned.unflatten(flat, parity);
  }

  /// Cocycle and boundary bases at level N, in level-N coordinates.
  std::pair<MatrixQ, MatrixQ> cocycles_and_boundaries(int parity, int n) const {
    const size_t vars = owned.source.ring.size();
    const MonomialTable low(vars, n), mid(vars, n + slack), high(vars, n + 2 * slack);
    const MatrixQ z = kernel<Rational>(image_matrix(parity, low, mid));
    const MatrixQ img = image_matrix(1 - parity, mid, high);
    // Keep the combinations whose image has no terms above degree n.
    const Index nslots = static_cast<Index>(owned.slots[static_cast<size_t>(parity)].size());
    std::vector<Index> low_rows, high_rows;
    for (Index s = 0; s < nslots; ++s)
      for (Index k = 0; k < high.size(); ++k)
        (mono::degree(high.list[static_cast<size_t>(k)]) <= n ? low_rows : high_rows).push_back(s * high.size() + k);
    MatrixQ upper(static_cast<Index>(high_rows.size()), img.cols());
    for (size_t r = 0; r < high_rows.size(); ++r) upper.row(static_cast<Index>(r)) = img.row(high_rows[r]);
    const MatrixQ keep = upper.rows() == 0 ? MatrixQ(MatrixQ::Identity(img.cols(), img.cols()))
                                           : kernel<Rational>(upper);
    MatrixQ b_high = sparse_product<Rational>(img, keep);
    // Re-index rows from the high table to the low table.
    MatrixQ b = MatrixQ::Zero(nslots * low.size(), b_high.cols());
    for (Index s = 0; s < nslots; ++s)
      for (Index k = 0; k < low.size(); ++k) {
        const Index src = s * high.size() + high.index.at(low.list[static_cast<size_t>(k)]);
        b.row(s * low.size() + k) = b_high.row(src);
      }
    return {z, column_basis<Rational>(b)};
  }

  VectorQ reduce(const MatrixPoly& cocycle, int parity) const override {
    const int n = std::max(bound, max_degree(cocycle));
    const size_t vars = owned.source.ring.size();
    const MonomialTable mid(vars, n + slack), high(vars, n + 2 * slack);
    const auto& r = reps[static_cast<size_t>(parity)];
    MatrixQ basis(static_cast<Index>(owned.slots[static_cast<size_t>(parity)].size()) * high.size(),
                  static_cast<Index>(r.size()));
    for (size_t k = 0; k < r.size(); ++k) basis.col(static_cast<Index>(k)) = coords(owned.flatten(r[k], parity), high);
    const MatrixQ system = hstack<Rational>(basis, image_matrix(1 - parity, mid, high));
    const auto sol = solve<Rational>(system, coords(owned.flatten(cocycle, parity), high));
    if (!sol) throw NotStabilized("cocycle is not in the span of the truncated cohomology; raise --truncate");
    return sol->head(static_cast<Index>(r.size()));
  }
};

std::array<Index, 2> truncated_dims(const TruncImpl& impl, int n) {
  std::array<Index, 2> out{};
  for (int k = 0; k < 2; ++k) {
    const auto [z, b] = impl.cocycles_and_boundaries(k, n);
    out[static_cast<size_t>(k)] = z.cols() - b.cols();
  }
  return out;
}

}  // namespace

VectorQ HDFCohomology::reduce(const MatrixPoly& cocycle, int parity) const {
  if (!complex_.is_cocycle(cocycle, parity)) throw NotACocycle("morphism is not a homogeneous 𝔡-cocycle");
  return impl_->reduce(cocycle, parity);
}

HDFCohomology hdf_cohomology(const HomComplex& h, const BackendChoice& backend) {
  HDFCohomology out;
  out.complex_ = h;
  out.backend_ = backend.kind;
  if (backend.kind == CohomologyBackend::snf) {
    if (h.source.ring.size() != 1)
      throw BackendUnavailable("snf backend needs a univariate ring, got " + std::to_string(h.source.ring.size()) +
                               " variables");
    auto impl = std::make_shared<SnfImpl>();
    impl->owned = h;
    for (int k = 0; k < 2; ++k) {
      const MatrixPolyUni out_map = to_uni(h.differential[static_cast<size_t>(k)]);
      const MatrixPolyUni in_map = to_uni(h.differential[static_cast<size_t>(1 - k)]);
      const Index m = out_map.cols();
      const SmithForm s = smith_normal_form(out_map);
      const Index r = s.rank(), kdim = m - r;
      const MatrixPolyUni kernel_basis = s.v.rightCols(kdim);
      auto& part = impl->parts[static_cast<size_t>(k)];
      part.kernel_coords = s.v_inv.bottomRows(kdim);
      const MatrixPolyUni pres = sparse_product<PolyUni>(part.kernel_coords, in_map);
      const SmithForm q = smith_normal_form(pres);
      if (q.rank() < kdim) throw PreconditionFailed("Hom cohomology is not finite-dimensional");
      part.quotient_u = q.u;
      const auto factors = q.invariant_factors();
      for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].degree() < 1) continue;
        part.factors.push_back(factors[i]);
        part.factor_rows.push_back(static_cast<Index>(i));
        for (int j = 0; j < factors[i].degree(); ++j) {
          const Vector<PolyUni> z = q.u_inv.col(static_cast<Index>(i)) * PolyUni::monomial(j);
          const Vector<PolyUni> c = sparse_product<PolyUni>(kernel_basis, z);
          std::vector<MultiPoly> flat;
          for (Index e = 0; e < c.size(); ++e) flat.push_back(from_uni(c(e)));
          out.reps_[static_cast<size_t>(k)].push_back(h.unflatten(flat, k));
        }
      }
    }
    out.next_dims_ = {out.dim(0), out.dim(1)};
    out.impl_ = impl;
    return out;
  }

  auto impl = std::make_shared<TruncImpl>();
  impl->owned = h;
  impl->bound = backend.truncation;
  impl->slack = std::max({0, max_degree(h.source.differential()), max_degree(h.target.differential())});
  const size_t vars = h.source.ring.size();
  const MonomialTable low(vars, backend.truncation);
  for (int k = 0; k < 2; ++k) {
    const auto [z, b] = impl->cocycles_and_boundaries(k, backend.truncation);
    const MatrixQ reps = complement_columns<Rational>(b, z);
    for (Index c = 0; c < reps.cols(); ++c) {
      const MatrixPoly rep = impl->cochain(reps.col(c), k, low);
      impl->reps[static_cast<size_t>(k)].push_back(rep);
      out.reps_[static_cast<size_t>(k)].push_back(rep);
    }
  }
  out.next_dims_ = truncated_dims(*impl, backend.truncation + std::max(1, h.source.potential.total_degree()));
  out.stabilized_ = out.next_dims_[0] == out.dim(0) && out.next_dims_[1] == out.dim(1);
  out.impl_ = impl;
  return out;
}

HomSpace hom_space(const MatrixFactorization& source, const MatrixFactorization& target, const BackendChoice& backend) {
  HomComplex h = hom_complex(source, target);
  HDFCohomology c = hdf_cohomology(h, backend);
  return HomSpace{std::move(h), std::move(c)};
}

ComposedClass compose(const HomSpace& bc, const MatrixPoly& g, int g_parity, const HomSpace& ab, const MatrixPoly& f,
                      int f_parity, const HomSpace& ac) {
  if (!bc.complex.is_cocycle(g, g_parity)) throw NotACocycle("second factor is not a cocycle");
  if (!ab.complex.is_cocycle(f, f_parity)) throw NotACocycle("first factor is not a cocycle");
  if (!(ab.complex.target == bc.complex.source) || !(ac.complex.source == ab.complex.source) ||
      !(ac.complex.target == bc.complex.target))
    throw InvalidArgument("compose: Hom spaces do not chain");
  ComposedClass out;
  out.cocycle = sparse_product(g, f);
  out.parity = (g_parity + f_parity) % 2;
  out.coordinates = ac.cohomology.reduce(out.cocycle, out.parity);
  return out;
}

// ---------------------------------------------------------------------------
// Traces

BulkFunctional::BulkFunctional(const LGPair& pair, TraceBackend backend, const Rational& scale)
    : pair_(pair), algebra_(milnor_algebra(jacobian_ideal(pair))), trace_(bulk_trace(algebra_, backend, scale)) {}

MultiPoly supertrace(const MatrixPoly& m, Index even_rank) {
  MultiPoly s;
  for (Index k = 0; k < m.rows(); ++k) {
    if (k < even_rank) s += m(k, k);
    else s -= m(k, k);
  }
  return s;
}

MatrixPoly antisymmetrized_derivatives(const MatrixFactorization& a) {
  const size_t d = a.ring.size();
  if (d > 3) throw PreconditionFailed("boundary trace is limited to d <= 3, got d = " + std::to_string(d));
  const MatrixPoly big_d = a.differential();
  std::vector<MatrixPoly> partial;
  for (size_t i = 0; i < d; ++i) partial.push_back(big_d.unaryExpr([i](const MultiPoly& p) { return p.derivative(i); }));
  std::vector<size_t> perm(d);
  std::iota(perm.begin(), perm.end(), size_t{0});
  MatrixPoly sum = MatrixPoly::Zero(a.rank(), a.rank());
  do {
    int inversions = 0;
    for (size_t x = 0; x < d; ++x)
      for (size_t y = x + 1; y < d; ++y) inversions += perm[x] > perm[y];
    MatrixPoly prod = scalar_identity(a.rank(), 1);
    for (size_t k : perm) prod = sparse_product(prod, partial[k]);
    if (inversions % 2 == 0) sum += prod;
    else sum -= prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum;
}

Rational boundary_trace(const MatrixFactorization& a, const MatrixPoly& t, const BulkFunctional& bulk) {
  if (a.potential != bulk.pair().potential) throw MismatchedPotential("trace functional built for a different W");
  if (t.rows() != a.rank() || t.cols() != a.rank()) throw InvalidArgument("boundary trace needs an endomorphism");
  const size_t d = a.ring.size();
  Rational factorial = 1;
  for (size_t k = 2; k <= d; ++k) factorial *= static_cast<int>(k);
  const MultiPoly s = supertrace(sparse_product(t, antisymmetrized_derivatives(a)), a.even_rank());
  return bulk(s) / factorial;
}

BoundaryGram boundary_gram(const HomSpace& forward, const HomSpace& backward, const BulkFunctional& bulk) {
  const MatrixFactorization& a1 = forward.complex.source;
  const MatrixFactorization& a2 = forward.complex.target;
  if (!(backward.complex.source == a2) || !(backward.complex.target == a1))
    throw InvalidArgument("boundary_gram: backward space must be Hom(a2, a1)");
  const int signature = static_cast<int>(a1.ring.size() % 2);
  BoundaryGram g;
  std::vector<std::pair<const MatrixPoly*, int>> rows, cols;
  for (int k = 0; k < 2; ++k) {
    g.row_dims[static_cast<size_t>(k)] = forward.cohomology.dim(k);
    g.col_dims[static_cast<size_t>(k)] = backward.cohomology.dim(k);
    for (const auto& t : forward.cohomology.representatives(k)) rows.push_back({&t, k});
    for (const auto& t : backward.cohomology.representatives(k)) cols.push_back({&t, k});
  }
  g.gram = MatrixQ::Zero(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  g.parity_selection = true;
  g.cyclic = true;
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) {
      const auto [t1, k1] = rows[i];
      const auto [t2, k2] = cols[j];
      const Rational v = boundary_trace(a2, sparse_product(*t1, *t2), bulk);
      g.gram(static_cast<Index>(i), static_cast<Index>(j)) = v;
      if ((k1 + k2) % 2 != signature && v != 0) g.parity_selection = false;
      const Rational back = boundary_trace(a1, sparse_product(*t2, *t1), bulk);
      if (v != ((k1 * k2) % 2 == 0 ? back : Rational(-back))) g.cyclic = false;
    }
  g.rank = rank<Rational>(g.gram);
  g.nondegenerate = g.gram.rows() == g.gram.cols() && g.rank == g.gram.rows();
  return g;
}

}  // namespace lgtrace
