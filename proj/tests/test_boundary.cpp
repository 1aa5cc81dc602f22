// Matrix factorizations, Hom complexes, cohomology backends and boundary traces.
#include "lgtrace/boundary.hpp"
#include "lgtrace/error.hpp"
#include "lgtrace/text.hpp"

#include <catch_amalgamated.hpp>

using namespace lgtrace;

namespace {

Ring ring_of(std::vector<std::string> vars) { return Ring{std::move(vars), MonomialOrder::degrevlex}; }

MultiPoly poly(const std::string& s, const Ring& r) { return text::parse_polynomial(s, r); }

MatrixPoly mat(const std::vector<std::vector<std::string>>& rows, const Ring& r, Index cols = -1) {
  const Index n = static_cast<Index>(rows.size());
  const Index m = n == 0 ? std::max<Index>(cols, 0) : static_cast<Index>(rows[0].size());
  MatrixPoly out(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = poly(rows[static_cast<size_t>(i)][static_cast<size_t>(j)], r);
  return out;
}

/// Rank (1|1) factorization (f, g) of W.
MatrixFactorization rank_one(const std::string& w, const std::string& f, const std::string& g, const Ring& r) {
  return mf_validate(r, poly(w, r), mat({{f}}, r), mat({{g}}, r));
}

const BackendChoice snf{CohomologyBackend::snf, 8};
BackendChoice trunc(int n) { return {CohomologyBackend::truncate, n}; }

bool zero(const MatrixPoly& m) { return m == MatrixPoly::Zero(m.rows(), m.cols()); }

std::array<Index, 2> dims(const HDFCohomology& h) { return {h.dim(0), h.dim(1)}; }

/// Spanning set of coboundaries 𝔡(E_ij x^k) of a given parity, k ≤ deg.
std::vector<MatrixPoly> coboundaries(const HomComplex& h, int parity, int deg) {
  std::vector<MatrixPoly> out;
  const auto& r = h.source.ring;
  for (const auto& [i, j] : h.slots[static_cast<size_t>(1 - parity)]) {
    Monomial m(r.size(), 0);
    auto rec = [&](auto&& self, size_t v, int left) -> void {
      if (v == r.size()) {
        Monomial t = m;
        mono::trim(t);
        MatrixPoly s = MatrixPoly::Zero(h.target.rank(), h.source.rank());
        s(i, j) = MultiPoly(t, 1);
        out.push_back(h.apply(s, 1 - parity));
        return;
      }
      for (int e = 0; e <= left; ++e) {
        m[v] = e;
        self(self, v + 1, left - e);
      }
      m[v] = 0;
    };
    rec(rec, 0, deg);
  }
  return out;
}

}  // namespace

TEST_CASE("mf_validate examples", "[boundary]") {
  const Ring r = ring_of({"x"});
  const auto a = rank_one("x^3", "x", "x^2", r);
  CHECK(a.even_rank() == 1);
  CHECK(a.odd_rank() == 1);
  const MatrixPoly d = a.differential();
  CHECK(sparse_product(d, d) == MatrixPoly(MatrixPoly::Identity(2, 2) * poly("x^3", r)));
  CHECK_NOTHROW(rank_one("x^2", "x", "x", r));
  CHECK_THROWS_AS(rank_one("x^3", "x", "x", r), NotAFactorization);
  CHECK_THROWS_AS(mf_validate(r, poly("x^2", r), mat({{"x", "1"}}, r), mat({{"x"}}, r)), InvalidArgument);
}

TEST_CASE("tensor products of factorizations", "[boundary]") {
  const Ring r = ring_of({"x", "y"});
  const auto a = rank_one("x^3", "x", "x^2", r);
  const auto b = rank_one("y^3", "y", "y^2", r);
  const auto t = tensor_mf(a, b);
  CHECK(t.even_rank() == 2);
  CHECK(t.odd_rank() == 2);
  CHECK(t.potential == poly("x^3 + y^3", r));
  const MatrixPoly d = t.differential();
  CHECK(sparse_product(d, d) == MatrixPoly(MatrixPoly::Identity(4, 4) * t.potential));

  const auto q = tensor_mf(rank_one("x^2", "x", "x", r), rank_one("y^2", "y", "y", r));
  CHECK(q.even_rank() == 2);
  CHECK(q.odd_rank() == 2);

  // A unit entry in one factor makes the product contractible.
  const auto unit = tensor_mf(a, rank_one("y^3", "1", "y^3", r));
  const auto h = hom_space(unit, unit, trunc(4));
  CHECK(dims(h.cohomology) == std::array<Index, 2>{0, 0});

  const Ring other = ring_of({"y"});
  CHECK_THROWS_AS(tensor_mf(rank_one("x^2", "x", "x", ring_of({"x"})), rank_one("y^2", "y", "y", other)),
                  InvalidArgument);
}

TEST_CASE("defect differential squares to zero", "[boundary][property]") {
  const Ring r = ring_of({"x"});
  const auto a = rank_one("x^3", "x", "x^2", r);
  const auto b = rank_one("x^3", "x^2", "x", r);
  for (const auto& [s, t] : std::vector<std::pair<MatrixFactorization, MatrixFactorization>>{{a, a}, {a, b}, {b, a}}) {
    const auto h = hom_complex(s, t);
    CHECK(zero(sparse_product(h.differential[1], h.differential[0])));
    CHECK(zero(sparse_product(h.differential[0], h.differential[1])));
    // Spot-check the matrix form against the direct formula on a generic cochain.
    MatrixPoly c(2, 2);
    c << poly("1 + x", r), 0, 0, poly("x^2 - 3", r);
    CHECK(zero(h.apply(h.apply(c, 0), 1)));
  }
  CHECK_THROWS_AS(hom_complex(a, rank_one("x^2", "x", "x", r)), MismatchedPotential);
}

TEST_CASE("cohomology dimensions and backend agreement", "[boundary]") {
  const Ring r = ring_of({"x"});
  struct Case {
    std::string w, f, g;
    std::array<Index, 2> dims;
  };
  const std::vector<Case> cases{{"x^3", "1", "x^3", {0, 0}},  {"x^2", "x", "x", {1, 1}},
                                {"x^3", "x", "x^2", {1, 1}},  {"x^4", "x^2", "x^2", {2, 2}},
                                {"x^4", "x", "x^3", {1, 1}},  {"x^5", "x^2", "x^3", {2, 2}}};
  for (const auto& c : cases) {
    INFO(c.w << " (" << c.f << ", " << c.g << ")");
    const auto a = rank_one(c.w, c.f, c.g, r);
    const auto h = hom_complex(a, a);
    const auto exact = hdf_cohomology(h, snf);
    CHECK(dims(exact) == c.dims);
    for (int n : {6, 9}) {
      const auto approx = hdf_cohomology(h, trunc(n));
      CHECK(dims(approx) == c.dims);
      CHECK(approx.stabilized());
    }
    for (int k = 0; k < 2; ++k)
      for (const auto& rep : exact.representatives(k)) CHECK(h.is_cocycle(rep, k));
  }
}

TEST_CASE("backend agreement on mixed Hom spaces", "[boundary]") {
  const Ring r = ring_of({"x"});
  const auto a = rank_one("x^4", "x", "x^3", r);
  const auto b = rank_one("x^4", "x^2", "x^2", r);
  for (const auto& [s, t] : std::vector<std::pair<MatrixFactorization, MatrixFactorization>>{{a, b}, {b, a}}) {
    const auto h = hom_complex(s, t);
    const auto e = hdf_cohomology(h, snf);
    const auto q = hdf_cohomology(h, trunc(7));
    CHECK(dims(e) == dims(q));
    // Each backend's representatives are independent classes for the other.
    for (int k = 0; k < 2; ++k) {
      MatrixQ m(q.dim(k), e.dim(k));
      for (Index c = 0; c < e.dim(k); ++c) m.col(c) = q.reduce(e.representatives(k)[static_cast<size_t>(c)], k);
      CHECK(rank<Rational>(m) == e.dim(k));
    }
  }
}

TEST_CASE("snf backend needs one variable", "[boundary]") {
  const Ring r = ring_of({"x", "y"});
  const auto a = tensor_mf(rank_one("x^2", "x", "x", r), rank_one("y^2", "y", "y", r));
  CHECK_THROWS_AS(hdf_cohomology(hom_complex(a, a), snf), BackendUnavailable);
  const auto q = hdf_cohomology(hom_complex(a, a), trunc(4));
  CHECK(q.stabilized());
  CHECK(q.dim(0) + q.dim(1) > 0);
}

TEST_CASE("reduction kills coboundaries", "[boundary][property]") {
  const Ring r = ring_of({"x"});
  const auto a = rank_one("x^4", "x^2", "x^2", r);
  const auto h = hom_complex(a, a);
  for (const auto& backend : {snf, trunc(8)}) {
    const auto c = hdf_cohomology(h, backend);
    for (int k = 0; k < 2; ++k) {
      for (const auto& b : coboundaries(h, k, 3)) CHECK(c.reduce(b, k).isZero());
      for (size_t i = 0; i < c.representatives(k).size(); ++i) {
        VectorQ e = VectorQ::Zero(c.dim(k));
        e(static_cast<Index>(i)) = 1;
        const auto cobs = coboundaries(h, k, 2);
        CHECK(c.reduce(c.representatives(k)[i] + cobs.front() - cobs.back(), k) == e);
      }
    }
    MatrixPoly bad = MatrixPoly::Zero(2, 2);
    bad(0, 0) = 1;
    CHECK_THROWS_AS(c.reduce(bad, 0), NotACocycle);
  }
}

TEST_CASE("composition", "[boundary]") {
  const Ring r = ring_of({"x"});
  const auto a = rank_one("x^2", "x", "x", r);
  const auto end = hom_space(a, a, snf);
  const MatrixPoly id = MatrixPoly::Identity(2, 2);
  MatrixPoly odd(2, 2);
  odd << 0, 1, -1, 0;
  REQUIRE(end.complex.is_cocycle(odd, 1));

  // Unit law.
  const auto u = compose(end, id, 0, end, odd, 1, end);
  CHECK(u.parity == 1);
  CHECK(u.coordinates == end.cohomology.reduce(odd, 1));

  // Two odd generators compose to a nonzero multiple of the identity class.
  const auto sq = compose(end, odd, 1, end, odd, 1, end);
  CHECK(sq.parity == 0);
  CHECK(sq.cocycle == MatrixPoly(-id));
  const VectorQ id_class = end.cohomology.reduce(id, 0);
  REQUIRE(!id_class.isZero());
  CHECK(sq.coordinates == VectorQ(-id_class));

  // Even times odd is odd.
  const auto b = rank_one("x^3", "x", "x^2", r);
  const auto eb = hom_space(b, b, snf);
  MatrixPoly even_x = MatrixPoly::Zero(2, 2);
  even_x(0, 0) = even_x(1, 1) = poly("x", r);
  REQUIRE(eb.complex.is_cocycle(even_x, 0));
  for (const auto& t : eb.cohomology.representatives(1))
    CHECK(compose(eb, even_x, 0, eb, t, 1, eb).parity == 1);

  MatrixPoly not_closed = MatrixPoly::Zero(2, 2);
  not_closed(0, 0) = 1;
  CHECK_THROWS_AS(compose(end, not_closed, 0, end, odd, 1, end), NotACocycle);
}

TEST_CASE("supertrace and antisymmetrized derivatives", "[boundary]") {
  const Ring r = ring_of({"x", "y"});
  MatrixPoly m(3, 3);
  m << 1, 2, 3, 4, poly("x", r), 6, 7, 8, poly("y", r);
  CHECK(supertrace(m, 1) == poly("1 - x - y", r));
  CHECK(supertrace(m, 3) == poly("1 + x + y", r));

  const auto t = tensor_mf(rank_one("x^2", "x", "x", r), rank_one("y^2", "y", "y", r));
  const MatrixPoly d = t.differential();
  const MatrixPoly dx = d.unaryExpr([](const MultiPoly& p) { return p.derivative(0); });
  const MatrixPoly dy = d.unaryExpr([](const MultiPoly& p) { return p.derivative(1); });
  CHECK(antisymmetrized_derivatives(t) == MatrixPoly(sparse_product(dx, dy) - sparse_product(dy, dx)));

  const Ring big = ring_of({"a", "b", "c", "e"});
  const auto four = mf_validate(big, poly("a^2", big), mat({{"a"}}, big), mat({{"a"}}, big));
  CHECK_THROWS_AS(antisymmetrized_derivatives(four), PreconditionFailed);
}

TEST_CASE("boundary trace examples", "[boundary]") {
  const Ring r = ring_of({"x"});
  const BulkFunctional cubic(LGPair(r, poly("x^3", r)), TraceBackend::residue);
  const auto a = rank_one("x^3", "x", "x^2", r);
  CHECK(boundary_trace(a, MatrixPoly::Identity(2, 2), cubic) == 0);

  // For x² with (x, x): D' = [[0,1],[1,0]], t = [[0,1],[-1,0]] gives
  // t D' = diag(1, -1), supertrace 2, and λ(2) = res(2 dx / 2x) = 1.
  const BulkFunctional quad(LGPair(r, poly("x^2", r)), TraceBackend::residue);
  const auto q = rank_one("x^2", "x", "x", r);
  MatrixPoly odd(2, 2);
  odd << 0, 1, -1, 0;
  CHECK(boundary_trace(q, odd, quad) == 1);
  CHECK(boundary_trace(q, odd, BulkFunctional(LGPair(r, poly("x^2", r)), TraceBackend::residue, 3)) == 9);

  CHECK_THROWS_AS(boundary_trace(q, odd, cubic), MismatchedPotential);
}

TEST_CASE("boundary trace vanishes on coboundaries", "[boundary][property]") {
  const Ring r = ring_of({"x"});
  const std::vector<std::array<std::string, 3>> suite{
      {"x^2", "x", "x"}, {"x^3", "x", "x^2"}, {"x^4", "x^2", "x^2"}, {"x^4", "x", "x^3"}, {"x^5", "x^2", "x^3"}};
  for (const auto& [w, f, g] : suite) {
    const auto a = rank_one(w, f, g, r);
    const BulkFunctional bulk(LGPair(r, poly(w, r)), TraceBackend::residue);
    const auto h = hom_complex(a, a);
    for (int k = 0; k < 2; ++k)
      for (const auto& b : coboundaries(h, k, 5)) CHECK(boundary_trace(a, b, bulk) == 0);
  }
  // Two variables: tensor of two quadratic factorizations.
  const Ring r2 = ring_of({"x", "y"});
  const auto t = tensor_mf(rank_one("x^2", "x", "x", r2), rank_one("y^3", "y", "y^2", r2));
  const BulkFunctional bulk(LGPair(r2, t.potential), TraceBackend::residue);
  const auto h = hom_complex(t, t);
  for (int k = 0; k < 2; ++k)
    for (const auto& b : coboundaries(h, k, 2)) CHECK(boundary_trace(t, b, bulk) == 0);
}

TEST_CASE("boundary Gram examples", "[boundary]") {
  const Ring r = ring_of({"x"});
  {
    const auto a = rank_one("x^2", "x", "x", r);
    const BulkFunctional bulk(LGPair(r, a.potential), TraceBackend::residue);
    const auto h = hom_space(a, a, snf);
    const auto g = boundary_gram(h, h, bulk);
    CHECK(g.gram.rows() == 2);
    CHECK(g.nondegenerate);
    CHECK(g.parity_selection);
    CHECK(g.cyclic);
    // Only the even-odd blocks survive in d = 1.
    CHECK(g.gram(0, 0) == 0);
    CHECK(g.gram(1, 1) == 0);
    CHECK(g.gram(0, 1) != 0);
  }
  {
    const auto a = rank_one("x^3", "1", "x^3", r);
    const BulkFunctional bulk(LGPair(r, a.potential), TraceBackend::residue);
    const auto h = hom_space(a, a, snf);
    const auto g = boundary_gram(h, h, bulk);
    CHECK(g.gram.size() == 0);
    CHECK(g.nondegenerate);
  }
  {
    const auto a1 = rank_one("x^4", "x", "x^3", r);
    const auto a2 = rank_one("x^4", "x^2", "x^2", r);
    const BulkFunctional bulk(LGPair(r, a1.potential), TraceBackend::residue);
    const auto g = boundary_gram(hom_space(a1, a2, snf), hom_space(a2, a1, snf), bulk);
    CHECK(g.gram.rows() > 0);
    CHECK(g.nondegenerate);
    CHECK(g.parity_selection);
    CHECK(g.cyclic);
  }
}

TEST_CASE("Gram nondegeneracy across a univariate suite", "[boundary][property]") {
  const Ring r = ring_of({"x"});
  for (int n = 2; n <= 6; ++n) {
    const std::string w = "x^" + std::to_string(n);
    const BulkFunctional bulk(LGPair(r, poly(w, r)), TraceBackend::residue);
    std::vector<MatrixFactorization> objects;
    for (int k = 1; k < n; ++k)
      objects.push_back(rank_one(w, "x^" + std::to_string(k), "x^" + std::to_string(n - k), r));
    for (const auto& a1 : objects)
      for (const auto& a2 : objects) {
        const auto g = boundary_gram(hom_space(a1, a2, snf), hom_space(a2, a1, snf), bulk);
        INFO(w << " " << a1.f(0, 0) << " -> " << a2.f(0, 0));
        CHECK(g.nondegenerate);
        CHECK(g.parity_selection);
        CHECK(g.cyclic);
      }
  }
}

TEST_CASE("Gram nondegeneracy in two variables", "[boundary]") {
  const Ring r = ring_of({"x", "y"});
  const auto t = tensor_mf(rank_one("x^2", "x", "x", r), rank_one("y^3", "y", "y^2", r));
  const BulkFunctional bulk(LGPair(r, t.potential), TraceBackend::residue);
  const auto h = hom_space(t, t, trunc(5));
  REQUIRE(h.cohomology.stabilized());
  const auto g = boundary_gram(h, h, bulk);
  CHECK(g.gram.rows() > 0);
  CHECK(g.nondegenerate);
  CHECK(g.parity_selection);
  CHECK(g.cyclic);
}

TEST_CASE("shift functor", "[boundary]") {
  const Ring r = ring_of({"x"});
  const auto a = rank_one("x^3", "x", "x^2", r);
  const auto s = shift_mf(a);
  CHECK(s.f == mat({{"x^2"}}, r));
  CHECK(s.g == mat({{"x"}}, r));
  CHECK(shift_mf(s) == a);
  CHECK_NOTHROW(mf_validate(r, s.potential, s.f, s.g));

  const auto b = rank_one("x^4", "x", "x^3", r);
  for (const auto& [p, q] : std::vector<std::pair<MatrixFactorization, MatrixFactorization>>{{a, a}, {b, b}}) {
    const auto plain = hom_space(p, q, snf);
    const auto shifted = hom_space(p, shift_mf(q), snf);
    CHECK(shifted.cohomology.dim(0) == plain.cohomology.dim(1));
    CHECK(shifted.cohomology.dim(1) == plain.cohomology.dim(0));
  }

  // Π on morphisms is an involution sending cocycles to cocycles of the
  // shifted Hom complex.
  const auto h = hom_complex(a, a);
  const auto hs = hom_complex(s, s);
  const auto ch = hdf_cohomology(h, snf);
  for (int k = 0; k < 2; ++k)
    for (const auto& t : ch.representatives(k)) {
      const MatrixPoly pt = shift_morphism(t, a, a);
      CHECK(shift_morphism(pt, s, s) == t);
      CHECK(hs.is_cocycle(pt, k));
    }
}

TEST_CASE("shifted trace is the negated trace", "[boundary]") {
  // With Π the plain block swap, the supertrace on ΠE is minus the one on E,
  // so tr_{Σa}(Πt) = -tr_a(t) for every endomorphism t.
  const Ring r = ring_of({"x"});
  for (const auto& [w, f, g] : std::vector<std::array<std::string, 3>>{{"x^2", "x", "x"}, {"x^4", "x^2", "x^2"}}) {
    const auto a = rank_one(w, f, g, r);
    const auto s = shift_mf(a);
    const BulkFunctional bulk(LGPair(r, a.potential), TraceBackend::residue);
    const auto c = hdf_cohomology(hom_complex(a, a), snf);
    for (int k = 0; k < 2; ++k)
      for (const auto& t : c.representatives(k))
        CHECK(boundary_trace(s, shift_morphism(t, a, a), bulk) == -boundary_trace(a, t, bulk));
  }
}
