#include "lgtrace/homology.hpp"

#include "lgtrace/error.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace lgtrace {

namespace {

std::string at(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

MatrixQ zeros(Index rows, Index cols) { return MatrixQ::Zero(rows, cols); }

MatrixQ coordinate_subspace(Index n, const std::vector<Index>& coords) {
  MatrixQ out = zeros(n, static_cast<Index>(coords.size()));
  for (size_t k = 0; k < coords.size(); ++k) out(coords[k], static_cast<Index>(k)) = 1;
  return out;
}

MatrixQ submatrix(const MatrixQ& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  MatrixQ out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  return out;
}

MatrixQ span_sum(const MatrixQ& a, const MatrixQ& b) { return column_basis<Rational>(hstack(a, b)); }

bool contained_in(const MatrixQ& vectors, const MatrixQ& space) {
  if (vectors.cols() == 0) return true;
  return rank<Rational>(hstack(space, vectors)) == rank(space);
}

// Quotient of span(num) by span(den) with den inside num.
struct Subquotient {
  MatrixQ reps;
  MatrixQ projection;
};

Subquotient subquotient(Index ambient, const MatrixQ& num, const MatrixQ& den) {
  Subquotient s;
  if (ambient == 0 || num.cols() == 0) {
    s.reps = zeros(ambient, 0);
    s.projection = zeros(0, ambient);
    return s;
  }
  const MatrixQ base = den.cols() > 0 ? column_basis(den) : zeros(ambient, 0);
  s.reps = complement_columns(base, num);
  s.projection = quotient_projector(base, s.reps);
  return s;
}

int parity(int p) { return ((p % 2) + 2) % 2; }

}  // namespace

// ---------------------------------------------------------------------------
// FiniteComplex

FiniteComplex::FiniteComplex(int lowest, std::vector<Index> node_dims, std::vector<MatrixQ> maps)
    : lo(lowest), dims(std::move(node_dims)), differentials(std::move(maps)) {
  validate();
}

FiniteComplex FiniteComplex::zero_maps(int lowest, std::vector<Index> node_dims) {
  std::vector<MatrixQ> maps;
  for (size_t k = 0; k + 1 < node_dims.size(); ++k) maps.push_back(zeros(node_dims[k + 1], node_dims[k]));
  return FiniteComplex(lowest, std::move(node_dims), std::move(maps));
}

Index FiniteComplex::dim(int degree) const {
  if (degree < lo || degree > hi()) return 0;
  return dims[static_cast<size_t>(degree - lo)];
}

MatrixQ FiniteComplex::differential(int degree) const {
  const auto k = static_cast<size_t>(degree - lo);
  if (degree >= lo && k < differentials.size()) return differentials[k];
  return zeros(dim(degree + 1), dim(degree));
}

void FiniteComplex::validate() const {
  if (!dims.empty() && differentials.size() + 1 != dims.size())
    throw InvalidArgument("complex needs one differential between consecutive nodes");
  for (size_t k = 0; k < differentials.size(); ++k) {
    if (differentials[k].rows() != dims[k + 1] || differentials[k].cols() != dims[k])
      throw InvalidArgument("differential shape mismatch at degree " +
                            std::to_string(lo + static_cast<int>(k)));
    if (k + 1 < differentials.size() && !sparse_product(differentials[k + 1], differentials[k]).isZero())
      throw InvalidArgument("differential does not square to zero at degree " +
                            std::to_string(lo + static_cast<int>(k)));
  }
}

std::vector<CohomologyGroup> cohomology(const FiniteComplex& c) {
  std::vector<CohomologyGroup> out;
  for (int k = c.lo; k <= c.hi(); ++k) {
    CohomologyGroup g;
    g.degree = k;
    const Index n = c.dim(k);
    g.cocycles = kernel(c.differential(k));
    const MatrixQ incoming = c.differential(k - 1);
    g.coboundaries = incoming.cols() > 0 ? column_basis(incoming) : zeros(n, 0);
    const Subquotient s = subquotient(n, g.cocycles, g.coboundaries);
    g.representatives = s.reps;
    g.projection = s.projection;
    g.dim = s.reps.cols();
    out.push_back(std::move(g));
  }
  return out;
}

FiniteComplex dual_complex(const FiniteComplex& c) {
  if (c.dims.empty()) return {};
  std::vector<Index> dims(c.dims.rbegin(), c.dims.rend());
  std::vector<MatrixQ> maps;
  // Dual degree k runs from -hi to -lo; its differential is the transpose of
  // the original one leaving -k-1.
  for (int k = -c.hi(); k < -c.lo; ++k) maps.push_back(c.differential(-k - 1).transpose());
  return FiniteComplex(-c.hi(), std::move(dims), std::move(maps));
}

// ---------------------------------------------------------------------------
// DoubleComplex

Index DoubleComplex::dim(int p, int q) const {
  auto it = dims.find({p, q});
  return it == dims.end() ? 0 : it->second;
}

MatrixQ DoubleComplex::vertical_map(int p, int q) const {
  auto it = vertical.find({p, q});
  return it == vertical.end() ? zeros(dim(p, q + 1), dim(p, q)) : it->second;
}

MatrixQ DoubleComplex::horizontal_map(int p, int q) const {
  auto it = horizontal.find({p, q});
  return it == horizontal.end() ? zeros(dim(p + 1, q), dim(p, q)) : it->second;
}

std::optional<std::pair<Bidegree, Bidegree>> DoubleComplex::bounds() const {
  std::optional<std::pair<Bidegree, Bidegree>> box;
  for (const auto& [pq, d] : dims) {
    if (d == 0) continue;
    if (!box) {
      box = std::make_pair(pq, pq);
      continue;
    }
    box->first.first = std::min(box->first.first, pq.first);
    box->first.second = std::min(box->first.second, pq.second);
    box->second.first = std::max(box->second.first, pq.first);
    box->second.second = std::max(box->second.second, pq.second);
  }
  return box;
}

void DoubleComplex::validate() const {
  for (const auto& [pq, m] : vertical)
    if (m.rows() != dim(pq.first, pq.second + 1) || m.cols() != dim(pq.first, pq.second))
      throw InvalidArgument("vertical map shape mismatch at " + at(pq.first, pq.second));
  for (const auto& [pq, m] : horizontal)
    if (m.rows() != dim(pq.first + 1, pq.second) || m.cols() != dim(pq.first, pq.second))
      throw InvalidArgument("horizontal map shape mismatch at " + at(pq.first, pq.second));
  const auto box = bounds();
  if (!box) return;
  const auto [lo, hi] = *box;
  for (int p = lo.first; p <= hi.first; ++p)
    for (int q = lo.second; q <= hi.second; ++q) {
      if (dim(p, q) == 0) continue;
      if (!sparse_product(vertical_map(p, q + 1), vertical_map(p, q)).isZero())
        throw InvalidArgument("vertical differential does not square to zero at " + at(p, q));
      if (!sparse_product(horizontal_map(p + 1, q), horizontal_map(p, q)).isZero())
        throw InvalidArgument("horizontal differential does not square to zero at " + at(p, q));
      if (sparse_product(vertical_map(p + 1, q), horizontal_map(p, q)) !=
          sparse_product(horizontal_map(p, q + 1), vertical_map(p, q)))
        throw InvalidArgument("differentials do not commute at " + at(p, q));
    }
}

Support classify_support(const DoubleComplex& k) {
  const auto box = k.bounds();
  if (!box) return Support::first_quadrant;
  if (box->first.second < 0)
    throw InvalidSupport("nonzero node below the row q = 0");
  return box->first.first >= 0 ? Support::first_quadrant : Support::strip;
}

std::vector<Index> TotalComplex::filtration_coords(int n, int p) const {
  std::vector<Index> out;
  auto it = offsets.find(n);
  if (it == offsets.end()) return out;
  const Index total = complex.dim(n);
  for (const auto& [col, off] : it->second) {
    if (col < p) continue;
    auto next = it->second.upper_bound(col);
    const Index end = next == it->second.end() ? total : next->second;
    for (Index c = off; c < end; ++c) out.push_back(c);
  }
  return out;
}

TotalComplex total_complex(const DoubleComplex& k) {
  k.validate();
  TotalComplex t;
  const auto box = k.bounds();
  if (!box) return t;
  const auto [lo, hi] = *box;
  const int n_lo = lo.first + lo.second, n_hi = hi.first + hi.second;
  std::vector<Index> dims;
  for (int n = n_lo; n <= n_hi; ++n) {
    Index off = 0;
    for (int p = lo.first; p <= hi.first; ++p) {
      const Index d = k.dim(p, n - p);
      if (d == 0) continue;
      t.offsets[n][p] = off;
      off += d;
    }
    dims.push_back(off);
  }
  std::vector<MatrixQ> maps;
  for (int n = n_lo; n < n_hi; ++n) {
    MatrixQ delta = zeros(dims[static_cast<size_t>(n + 1 - n_lo)], dims[static_cast<size_t>(n - n_lo)]);
    for (const auto& [p, off] : t.offsets[n]) {
      const int q = n - p;
      const Index d = k.dim(p, q);
      auto& next = t.offsets[n + 1];
      if (auto v = next.find(p); v != next.end())
        delta.block(v->second, off, k.dim(p, q + 1), d) += k.vertical_map(p, q);
      if (auto h = next.find(p + 1); h != next.end()) {
        const MatrixQ m = k.horizontal_map(p, q);
        delta.block(h->second, off, k.dim(p + 1, q), d) += parity(q) == 0 ? m : MatrixQ(-m);
      }
    }
    maps.push_back(std::move(delta));
  }
  t.complex = FiniteComplex(n_lo, std::move(dims), std::move(maps));
  return t;
}

// ---------------------------------------------------------------------------
// Spectral sequence

namespace {

// Z_r^p in total degree n: elements of F^p whose differential lies in
// F^{p+r}. For r <= 0 this is F^p itself; `r == kInfinite` gives F^p ∩ ker.
constexpr int kInfinite = 1 << 20;

class Filtration {
 public:
  explicit Filtration(const TotalComplex& t) : t_(t) {}

  MatrixQ z(int r, int p, int n) const {
    const Index dim = t_.complex.dim(n);
    const auto cols = t_.filtration_coords(n, p);
    if (r <= 0 || cols.empty()) return coordinate_subspace(dim, cols);
    const auto target = t_.filtration_coords(n + 1, r >= kInfinite ? kInfinite : p + r);
    std::vector<Index> rows;
    const Index next_dim = t_.complex.dim(n + 1);
    for (Index i = 0, k = 0; i < next_dim; ++i) {
      if (k < static_cast<Index>(target.size()) && target[static_cast<size_t>(k)] == i) {
        ++k;
        continue;
      }
      rows.push_back(i);
    }
    const MatrixQ ker = kernel<Rational>(submatrix(t_.complex.differential(n), rows, cols));
    MatrixQ out = zeros(dim, ker.cols());
    for (size_t k = 0; k < cols.size(); ++k) out.row(cols[k]) = ker.row(static_cast<Index>(k));
    return out;
  }

  // Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}
  MatrixQ boundary_part(int r, int p, int n) const {
    const MatrixQ a = z(r - 1, p + 1, n);
    const MatrixQ b = t_.complex.differential(n - 1) * z(r - 1, p - r + 1, n - 1);
    return span_sum(a, b);
  }

 private:
  const TotalComplex& t_;
};

}  // namespace

Index SpectralPage::dim(int p, int q) const {
  auto it = entries.find({p, q});
  return it == entries.end() ? 0 : it->second.dim;
}

const FilteredDegree* FilteredCohomology::at(int n) const {
  for (const auto& d : degrees)
    if (d.n == n) return &d;
  return nullptr;
}

SpectralSequence spectral_pages(const DoubleComplex& k, int r_max) {
  SpectralSequence out;
  out.support = classify_support(k);
  const TotalComplex t = total_complex(k);
  const auto box = k.bounds();
  if (!box) {
    out.pages.push_back(SpectralPage{});
    return out;
  }
  const auto [lo, hi] = *box;
  const int width = hi.first - lo.first + 1;
  const int last = width + 1;  // pages are constant from here on
  const Filtration f(t);

  std::vector<SpectralPage> pages;
  for (int r = 0; r <= last; ++r) {
    SpectralPage page;
    page.r = r;
    for (int p = lo.first; p <= hi.first; ++p)
      for (int q = lo.second; q <= hi.second; ++q) {
        const int n = p + q;
        const Index ambient = t.complex.dim(n);
        const Subquotient s = subquotient(ambient, f.z(r, p, n), f.boundary_part(r, p, n));
        if (s.reps.cols() == 0) continue;
        page.entries[{p, q}] = PageEntry{s.reps.cols(), s.reps, s.projection};
      }
    for (const auto& [pq, e] : page.entries) {
      const Bidegree target{pq.first + r, pq.second - r + 1};
      auto it = page.entries.find(target);
      if (it == page.entries.end()) continue;
      const int n = pq.first + pq.second;
      page.differential[pq] = it->second.projection * (t.complex.differential(n) * e.representatives);
    }
    pages.push_back(std::move(page));
  }

  auto moving = [](const SpectralPage& pg) {
    return std::any_of(pg.differential.begin(), pg.differential.end(),
                       [](const auto& kv) { return !kv.second.isZero(); });
  };
  int stable = last;
  while (stable > 0 && !moving(pages[static_cast<size_t>(stable - 1)])) --stable;
  if (stable > r_max)
    throw NotStabilized("pages still change at r = " + std::to_string(stable - 1) +
                        " beyond r_max = " + std::to_string(r_max));
  pages.resize(static_cast<size_t>(stable) + 1);
  out.pages = std::move(pages);
  out.stable_page = stable;

  for (int n = t.complex.lo; n <= t.complex.hi(); ++n) {
    FilteredDegree fd;
    fd.n = n;
    const MatrixQ im = column_basis<Rational>(t.complex.differential(n - 1));
    const Index im_dim = im.cols();
    fd.dim = kernel(t.complex.differential(n)).cols() - im_dim;
    for (int p = lo.first; p <= hi.first + 1; ++p)
      fd.filtration[p] = rank<Rational>(hstack(f.z(kInfinite, p, n), im)) - im_dim;
    for (int p = lo.first; p <= hi.first; ++p) fd.graded[p] = fd.filtration[p] - fd.filtration[p + 1];
    out.abutment.degrees.push_back(std::move(fd));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtered comparison

MatrixQ DoubleComplexMap::component(int p, int q) const {
  auto it = components.find({p, q});
  return it == components.end() ? zeros(target.dim(p, q), source.dim(p, q)) : it->second;
}

bool FilteredComparison::all_isomorphisms() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const FilteredVerdict& v) {
    return v.preserves_filtration && v.graded_isomorphism;
  });
}

namespace {

FiniteComplex column(const DoubleComplex& k, int p, int q_lo, int q_hi) {
  std::vector<Index> dims;
  std::vector<MatrixQ> maps;
  for (int q = q_lo; q <= q_hi; ++q) dims.push_back(k.dim(p, q));
  for (int q = q_lo; q < q_hi; ++q) maps.push_back(k.vertical_map(p, q));
  return FiniteComplex(q_lo, std::move(dims), std::move(maps));
}

}  // namespace

FilteredComparison filtered_compare(const DoubleComplexMap& tau) {
  const DoubleComplex& src = tau.source;
  const DoubleComplex& tgt = tau.target;
  src.validate();
  tgt.validate();
  if (classify_support(src) != classify_support(tgt))
    throw PreconditionFailed("source and target satisfy different support conditions");

  auto sb = src.bounds(), tb = tgt.bounds();
  if (!sb && !tb) return {};
  const int p_lo = std::min(sb ? sb->first.first : tb->first.first, tb ? tb->first.first : sb->first.first);
  const int p_hi = std::max(sb ? sb->second.first : tb->second.first, tb ? tb->second.first : sb->second.first);
  const int q_lo = std::min(sb ? sb->first.second : tb->first.second, tb ? tb->first.second : sb->first.second);
  const int q_hi = std::max(sb ? sb->second.second : tb->second.second, tb ? tb->second.second : sb->second.second);

  for (const auto& [pq, m] : tau.components)
    if (m.rows() != tgt.dim(pq.first, pq.second) || m.cols() != src.dim(pq.first, pq.second))
      throw PreconditionFailed("component shape mismatch at " + at(pq.first, pq.second));

  for (int p = p_lo; p <= p_hi; ++p)
    for (int q = q_lo; q <= q_hi; ++q) {
      const MatrixQ c = tau.component(p, q);
      if (rank(c) != src.dim(p, q)) throw PreconditionFailed("map not injective at " + at(p, q));
      if (tau.component(p, q + 1) * src.vertical_map(p, q) != tgt.vertical_map(p, q) * c)
        throw PreconditionFailed("map does not commute with the vertical differential at " + at(p, q));
      if (tau.component(p + 1, q) * src.horizontal_map(p, q) != tgt.horizontal_map(p, q) * c)
        throw PreconditionFailed("map does not commute with the horizontal differential at " + at(p, q));
    }

  // Column quasi-isomorphisms.
  for (int p = p_lo; p <= p_hi; ++p) {
    const auto hs = cohomology(column(src, p, q_lo, q_hi));
    const auto ht = cohomology(column(tgt, p, q_lo, q_hi));
    for (size_t i = 0; i < hs.size(); ++i) {
      const int q = q_lo + static_cast<int>(i);
      const MatrixQ induced = ht[i].projection * (tau.component(p, q) * hs[i].representatives);
      if (hs[i].dim != ht[i].dim || rank(induced) != hs[i].dim)
        throw PreconditionFailed("vertical cohomology not mapped isomorphically at " + at(p, q));
    }
  }

  const TotalComplex ts = total_complex(src), tt = total_complex(tgt);
  const Filtration fs(ts), ft(tt);
  auto total_map = [&](int n) {
    MatrixQ m = zeros(tt.complex.dim(n), ts.complex.dim(n));
    auto so = ts.offsets.find(n);
    auto to = tt.offsets.find(n);
    if (so == ts.offsets.end() || to == tt.offsets.end()) return m;
    for (const auto& [p, off] : so->second) {
      auto target = to->second.find(p);
      if (target == to->second.end()) continue;
      const int q = n - p;
      m.block(target->second, off, tgt.dim(p, q), src.dim(p, q)) = tau.component(p, q);
    }
    return m;
  };

  FilteredComparison out;
  for (int n = p_lo + q_lo; n <= p_hi + q_hi; ++n) {
    const MatrixQ map = total_map(n);
    const MatrixQ ims = column_basis<Rational>(ts.complex.differential(n - 1));
    const MatrixQ imt = column_basis<Rational>(tt.complex.differential(n - 1));
    out.total_dims[n] = {kernel(ts.complex.differential(n)).cols() - ims.cols(),
                         kernel(tt.complex.differential(n)).cols() - imt.cols()};
    for (int p = p_lo; p <= p_hi; ++p) {
      FilteredVerdict v;
      v.p = p;
      v.n = n;
      const MatrixQ zs = fs.z(kInfinite, p, n);
      const MatrixQ zt = ft.z(kInfinite, p, n);
      const Subquotient gs = subquotient(ts.complex.dim(n), span_sum(zs, ims),
                                         span_sum(fs.z(kInfinite, p + 1, n), ims));
      const Subquotient gt = subquotient(tt.complex.dim(n), span_sum(zt, imt),
                                         span_sum(ft.z(kInfinite, p + 1, n), imt));
      const MatrixQ image = map * zs;
      v.preserves_filtration = contained_in(image, span_sum(zt, imt));
      const MatrixQ induced = gt.projection * (map * gs.reps);
      v.graded_isomorphism = v.preserves_filtration && gs.reps.cols() == gt.reps.cols() &&
                             rank(induced) == gs.reps.cols();
      out.verdicts.push_back(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Periodic unwinding

PeriodicWindow unwind_periodic(const PeriodicDoubleComplex& k, int n_lo, int n_hi, int r_max) {
  if (n_lo > n_hi) throw InvalidArgument("empty degree window");
  for (int par = 0; par < 2; ++par) {
    if (static_cast<int>(k.dims[par].size()) != k.height)
      throw InvalidArgument("periodic complex: one dimension per row expected");
    if (static_cast<int>(k.horizontal[par].size()) != k.height ||
        static_cast<int>(k.vertical[par].size()) != std::max(k.height - 1, 0))
      throw InvalidArgument("periodic complex: map count does not match the height");
  }
  const int top = k.height - 1;
  // Degrees n-1..n+1 of the window must be complete: every (p, q) with
  // 0 <= q <= top and n_lo - 1 <= p + q <= n_hi + 1.
  const int p_first = n_lo - 1 - top;
  const int p_last = n_hi + 1;

  PeriodicWindow w;
  w.n_lo = n_lo;
  w.n_hi = n_hi;
  DoubleComplex& d = w.materialized;
  for (int p = p_first; p <= p_last; ++p)
    for (int q = 0; q <= top; ++q) {
      const int par = parity(p);
      d.dims[{p, q}] = k.dims[par][static_cast<size_t>(q)];
      if (q < top) d.vertical[{p, q}] = k.vertical[par][static_cast<size_t>(q)];
      if (p < p_last) d.horizontal[{p, q}] = k.horizontal[par][static_cast<size_t>(q)];
    }
  w.spectral = spectral_pages(d, r_max);
  for (int n = n_lo; n <= n_hi; ++n) {
    const FilteredDegree* fd = w.spectral.abutment.at(n);
    w.total_dims[n] = fd ? fd->dim : 0;
  }
  w.periodic = true;
  for (int n = n_lo; n + 2 <= n_hi; ++n)
    if (w.total_dims[n] != w.total_dims[n + 2]) w.periodic = false;
  return w;
}

}  // namespace lgtrace
