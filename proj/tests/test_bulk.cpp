// Milnor algebras, truncated Koszul cohomology, residue and socle traces.
#include "lgtrace/bulk.hpp"
#include "lgtrace/error.hpp"
#include "lgtrace/homology.hpp"
#include "lgtrace/text.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace lgtrace;

namespace {

Ring ring_of(std::vector<std::string> vars) { return Ring{std::move(vars), MonomialOrder::degrevlex}; }

LGPair pair_of(const std::string& w, std::vector<std::string> vars) {
  Ring r = ring_of(std::move(vars));
  return LGPair(r, text::parse_polynomial(w, r));
}

MultiPoly poly(const std::string& f, const LGPair& p) { return text::parse_polynomial(f, p.ring); }

// Oracle for Fermat potentials W = Σ x_i^{a_i}: the residue of x^e dx over
// (a_1 x_1^{a_1-1}, ...) factors into one-variable Laurent coefficients,
// nonzero only when every e_i = a_i - 2.
Rational fermat_residue(const Monomial& e, const std::vector<int>& a) {
  Rational r = 1;
  for (size_t i = 0; i < a.size(); ++i) {
    if (mono::exponent(e, i) != a[i] - 2) return 0;
    r /= a[i];
  }
  return r;
}

Rational fermat_residue(const MultiPoly& f, const std::vector<int>& a) {
  Rational s = 0;
  for (const auto& [m, c] : f.terms()) s += c * fermat_residue(m, a);
  return s;
}

MultiPoly random_poly(std::mt19937& rng, size_t vars, int degree) {
  std::uniform_int_distribution<int> c(-3, 3), e(0, degree);
  MultiPoly f;
  for (int t = 0; t < 5; ++t) {
    Monomial m(vars);
    for (auto& x : m) x = e(rng) / static_cast<int>(vars);
    mono::trim(m);
    f += MultiPoly(m, c(rng));
  }
  return f;
}

struct Suite {
  std::string w;
  std::vector<std::string> vars;
  std::vector<int> fermat;
  size_t mu;
};

const std::vector<Suite> kSuite = {
    {"x^2", {"x"}, {2}, 1},          {"x^3", {"x"}, {3}, 2},           {"x^4", {"x"}, {4}, 3},
    {"x^5", {"x"}, {5}, 4},          {"x^3+y^3", {"x", "y"}, {3, 3}, 4}, {"x^3+y^4", {"x", "y"}, {3, 4}, 6},
    {"x^2+y^2+z^2", {"x", "y", "z"}, {2, 2, 2}, 1},
};

}  // namespace

TEST_CASE("LG pairs reject constant potentials", "[bulk]") {
  Ring r = ring_of({"x"});
  CHECK_THROWS_AS(LGPair(r, MultiPoly(3)), InvalidArgument);
  CHECK(pair_of("x^3", {"x"}).signature() == 1);
  CHECK(pair_of("x^2+y^2", {"x", "y"}).signature() == 0);
}

TEST_CASE("jacobian ideal examples", "[bulk]") {
  const auto p1 = pair_of("x^3", {"x"});
  CHECK(jacobian_ideal(p1).partials == std::vector<MultiPoly>{poly("3x^2", p1)});
  const auto p2 = pair_of("x^3+y^3", {"x", "y"});
  CHECK(jacobian_ideal(p2).partials == std::vector<MultiPoly>{poly("3x^2", p2), poly("3y^2", p2)});
  const auto p3 = pair_of("x*y", {"x", "y"});
  CHECK(jacobian_ideal(p3).partials == std::vector<MultiPoly>{poly("y", p3), poly("x", p3)});
}

TEST_CASE("critical locus finiteness", "[bulk]") {
  auto locus = [](const std::string& w, std::vector<std::string> v) {
    return critical_locus_finite(jacobian_ideal(pair_of(w, std::move(v))));
  };
  auto a = locus("x^2+y^2", {"x", "y"});
  CHECK(a.finite);
  CHECK(a.milnor_number == 1u);
  auto b = locus("x*y", {"x", "y"});
  CHECK(b.finite);
  CHECK(b.milnor_number == 1u);
  auto c = locus("x^2*y", {"x", "y"});
  CHECK_FALSE(c.finite);
  CHECK_FALSE(c.milnor_number.has_value());
  CHECK_THROWS_AS(milnor_algebra(jacobian_ideal(pair_of("x^2*y", {"x", "y"}))), NotZeroDimensional);
  for (int n = 1; n <= 8; ++n) CHECK(locus("x^" + std::to_string(n + 1), {"x"}).milnor_number == size_t(n));
}

TEST_CASE("Milnor algebra examples", "[bulk]") {
  const auto a2 = milnor_algebra(jacobian_ideal(pair_of("x^2", {"x"})));
  CHECK(a2.basis() == std::vector<Monomial>{{}});

  const auto a3 = milnor_algebra(jacobian_ideal(pair_of("x^3", {"x"})));
  CHECK(a3.basis() == std::vector<Monomial>{{}, {1}});
  CHECK(a3.product(1, 1).isZero());

  const auto p = pair_of("x^3+y^3", {"x", "y"});
  const auto a = milnor_algebra(jacobian_ideal(p));
  REQUIRE(a.dimension() == 4);
  std::set<Monomial> basis(a.basis().begin(), a.basis().end());
  CHECK(basis == std::set<Monomial>{{}, {1}, {0, 1}, {1, 1}});
  const VectorQ x = a.coordinates(poly("x", p)), xy = a.coordinates(poly("x*y", p));
  CHECK(a.multiply(x, x).isZero());
  CHECK(a.multiply(xy, x).isZero());
  CHECK(a.multiply(x, a.coordinates(poly("y", p))) == xy);
}

TEST_CASE("Milnor algebras are commutative, associative and unital", "[bulk][property]") {
  for (const auto& s : kSuite) {
    const auto a = milnor_algebra(jacobian_ideal(pair_of(s.w, s.vars)));
    CHECK(a.dimension() == s.mu);
    CHECK(a.is_commutative());
    CHECK(a.is_associative());
    CHECK(a.has_unit());
  }
  const auto a = milnor_algebra(jacobian_ideal(pair_of("x^3-3x+y^2+x*y", {"x", "y"})));
  CHECK(a.is_associative());
  CHECK(a.has_unit());
}

TEST_CASE("table products agree with normal forms of products", "[bulk][property]") {
  std::mt19937 rng(41);
  const auto p = pair_of("x^3+y^4", {"x", "y"});
  const auto a = milnor_algebra(jacobian_ideal(p));
  for (int t = 0; t < 20; ++t) {
    const MultiPoly f = random_poly(rng, 2, 6), g = random_poly(rng, 2, 6);
    CHECK(a.multiply(a.coordinates(f), a.coordinates(g)) == a.coordinates(f * g));
  }
}

TEST_CASE("residue trace examples", "[bulk]") {
  const auto p = pair_of("x^3", {"x"});
  const auto a = milnor_algebra(jacobian_ideal(p));
  const auto tr = bulk_trace(a, TraceBackend::residue);
  CHECK(tr.covector(0) == 0);
  CHECK(tr.covector(1) == Rational(1, 3));
  CHECK(tr(a.coordinates(hessian(p))) == 2);

  const auto g2 = bulk_gram(milnor_algebra(jacobian_ideal(pair_of("x^2", {"x"}))),
                            bulk_trace(milnor_algebra(jacobian_ideal(pair_of("x^2", {"x"}))), TraceBackend::residue));
  CHECK(g2.gram(0, 0) == Rational(1, 2));
  CHECK(g2.determinant == Rational(1, 2));

  const auto g3 = bulk_gram(a, tr);
  MatrixQ expect(2, 2);
  expect << Rational(0), Rational(1, 3), Rational(1, 3), Rational(0);
  CHECK(g3.gram == expect);
  CHECK(g3.determinant == Rational(-1, 9));
  CHECK(g3.nondegenerate);
}

TEST_CASE("residue trace matches the Fermat oracle", "[bulk][property]") {
  std::mt19937 rng(8);
  for (const auto& s : kSuite) {
    const auto p = pair_of(s.w, s.vars);
    const auto a = milnor_algebra(jacobian_ideal(p));
    const GlobalResidue res(a);
    const auto tr = bulk_trace(a, TraceBackend::residue);
    for (size_t k = 0; k < a.dimension(); ++k)
      CHECK(tr.covector(static_cast<Index>(k)) == fermat_residue(a.basis()[k], s.fermat));
    // Direct evaluation on unreduced polynomials: the trace kills the ideal.
    for (int t = 0; t < 8; ++t) {
      const MultiPoly f = random_poly(rng, s.vars.size(), 8);
      CHECK(res(f) == fermat_residue(f, s.fermat));
      CHECK(res(f) == tr(a.coordinates(f)));
      for (const auto& d : a.jacobian().partials) CHECK(res(f * d) == 0);
    }
    CHECK(tr(a.coordinates(hessian(p))) == Rational(static_cast<long>(s.mu)));
  }
}

TEST_CASE("residue trace sums over critical points away from the origin", "[bulk][property]") {
  // W = x^3 - 3x + y^2 has nondegenerate critical points (±1, 0), Hessian 12x;
  // the global residue is Σ f(p) / Hess(p).
  const auto p = pair_of("x^3-3x+y^2", {"x", "y"});
  const auto a = milnor_algebra(jacobian_ideal(p));
  REQUIRE(a.dimension() == 2);
  const GlobalResidue res(a);
  std::mt19937 rng(2);
  for (int t = 0; t < 20; ++t) {
    const MultiPoly f = random_poly(rng, 2, 6);
    auto at = [&](const Rational& x) {
      Rational s = 0;
      for (const auto& [m, c] : f.terms()) {
        if (mono::exponent(m, 1) > 0) continue;
        Rational v = c;
        for (int e = 0; e < mono::exponent(m, 0); ++e) v *= x;
        s += v;
      }
      return s;
    };
    CHECK(res(f) == at(1) / 12 - at(-1) / 12);
  }
  CHECK(bulk_trace(a, TraceBackend::residue)(a.coordinates(hessian(p))) == 2);
  CHECK(bulk_gram(a, bulk_trace(a, TraceBackend::residue)).nondegenerate);
  // The origin is not critical, so the annihilator of (x, y) is zero.
  CHECK(socle(a).cols() == 0);
  CHECK_THROWS_AS(bulk_trace(a, TraceBackend::socle), PreconditionFailed);
}

TEST_CASE("socle trace and Gram nondegeneracy on the suite", "[bulk][property]") {
  for (const auto& s : kSuite) {
    const auto p = pair_of(s.w, s.vars);
    const auto a = milnor_algebra(jacobian_ideal(p));
    const MatrixQ soc = socle(a);
    REQUIRE(soc.cols() == 1);
    // The socle is spanned by the Hessian class.
    const VectorQ hess = a.coordinates(hessian(p));
    CHECK(rank<Rational>(hstack<Rational>(soc, hess)) == 1);
    for (auto backend : {TraceBackend::residue, TraceBackend::socle}) {
      const auto g = bulk_gram(a, bulk_trace(a, backend));
      CHECK(g.gram == g.gram.transpose());
      CHECK(g.nondegenerate);
    }
  }
}

TEST_CASE("traces are Frobenius and scale quadratically", "[bulk][property]") {
  for (const auto& s : kSuite) {
    const auto a = milnor_algebra(jacobian_ideal(pair_of(s.w, s.vars)));
    const Index n = static_cast<Index>(a.dimension());
    for (auto backend : {TraceBackend::residue, TraceBackend::socle}) {
      const auto tr = bulk_trace(a, backend);
      for (Index u = 0; u < n; ++u)
        for (Index v = 0; v < n; ++v)
          for (Index w = 0; w < n; ++w) {
            const VectorQ eu = VectorQ::Unit(n, u), ev = VectorQ::Unit(n, v), ew = VectorQ::Unit(n, w);
            CHECK(tr(a.multiply(a.multiply(eu, ev), ew)) == tr(a.multiply(eu, a.multiply(ev, ew))));
          }
      const auto g1 = bulk_gram(a, tr);
      for (const Rational c : {Rational(2), Rational(-3), Rational(1, 5)}) {
        const auto gc = bulk_gram(a, bulk_trace(a, backend, c));
        CHECK(gc.gram == (c * c) * g1.gram);
        CHECK(gc.nondegenerate == g1.nondegenerate);
      }
    }
  }
}

TEST_CASE("grading weights", "[bulk]") {
  CHECK(grading_weights(pair_of("x^3+y^3", {"x", "y"})) == std::vector<int>{1, 1});
  CHECK(grading_weights(pair_of("x^3+y^4", {"x", "y"})) == std::vector<int>{4, 3});
  CHECK(grading_weights(pair_of("x^2*y", {"x", "y"})) == std::vector<int>{1, 1});
  CHECK(grading_weights(pair_of("x^3-3x", {"x"})) == std::vector<int>{1});
}

TEST_CASE("truncated Koszul cohomology examples", "[bulk]") {
  const auto k1 = koszul_cohomology_truncated(pair_of("x^3", {"x"}), 10);
  CHECK(k1.at_bound.dims.at(0) == 2);
  CHECK(k1.at_bound.dims.at(-1) == 0);
  CHECK(k1.stabilized);

  const auto k2 = koszul_cohomology_truncated(pair_of("x^3+y^3", {"x", "y"}), 10);
  CHECK(k2.at_bound.dims.at(0) == 4);
  CHECK(k2.at_bound.dims.at(-1) == 0);
  CHECK(k2.at_bound.dims.at(-2) == 0);
  CHECK(k2.stabilized);

  const auto k3 = koszul_cohomology_truncated(pair_of("x^2*y", {"x", "y"}), 8);
  CHECK(k3.at_bound.dims.at(-1) > 0);
  CHECK_THROWS_AS(koszul_cohomology_truncated(pair_of("x^3", {"x"}), 2), InvalidArgument);
}

TEST_CASE("Koszul complex agrees with the generic cohomology routine", "[bulk][property]") {
  for (const auto& [w, vars, n] : std::vector<std::tuple<std::string, std::vector<std::string>, int>>{
           {"x^3", {"x"}, 6}, {"x^3+y^4", {"x", "y"}, 7}, {"x^2*y", {"x", "y"}, 6}, {"x^3-3x+y^2", {"x", "y"}, 5}}) {
    const auto p = pair_of(w, vars);
    const auto kc = koszul_complex(p, n);
    kc.complex.validate();
    const auto report = koszul_cohomology_truncated(p, n);
    for (const auto& g : cohomology(kc.complex)) CHECK(report.at_bound.dims.at(g.degree) == g.dim);
  }
}

TEST_CASE("non-isolated critical locus leaves an explicit class in degree -1", "[bulk]") {
  // v = x ∂x - 2y ∂y is contracted to 2x^2y - 2x^2y = 0, and boundaries
  // f (2xy ∂y - x^2 ∂x) have ∂x-coefficient divisible by x^2.
  const auto p = pair_of("x^2*y", {"x", "y"});
  const auto kc = koszul_complex(p, 8);
  const auto& b1 = kc.bases[1];
  VectorQ v = VectorQ::Zero(static_cast<Index>(b1.size()));
  for (size_t k = 0; k < b1.size(); ++k) {
    if (b1[k] == std::pair<Monomial, Subset>{{1}, 0b01}) v(static_cast<Index>(k)) = 1;
    if (b1[k] == std::pair<Monomial, Subset>{{0, 1}, 0b10}) v(static_cast<Index>(k)) = -2;
  }
  REQUIRE(v.cwiseAbs().sum() == 3);
  CHECK((kc.complex.differential(-1) * v).isZero());
  const MatrixQ boundaries = kc.complex.differential(-2);
  CHECK_FALSE(solve<Rational>(boundaries, v).has_value());

  for (const auto& s : kSuite) {
    const auto k = koszul_cohomology_truncated(pair_of(s.w, s.vars), 10);
    CHECK(k.stabilized);
    CHECK(k.at_bound.dims.at(0) == static_cast<Index>(s.mu));
    for (const auto& [deg, dim] : k.at_bound.dims)
      if (deg < 0) CHECK(dim == 0);
  }
}

TEST_CASE("trace backend names", "[bulk]") {
  CHECK(parse_backend("residue") == TraceBackend::residue);
  CHECK(to_string(parse_backend("socle")) == "socle");
  CHECK_THROWS_AS(parse_backend("snf"), InvalidArgument);
}
