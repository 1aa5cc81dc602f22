// Graded duality, the graded Serre pairing and contraction identities.
#include "lgtrace/error.hpp"
#include "lgtrace/gradedpair.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace lgtrace;

namespace {

VectorQ vec(std::initializer_list<int> xs) {
  VectorQ v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (int x : xs) v(i++) = x;
  return v;
}

// Oracle: sign of the permutation sorting a list of distinct indices, by
// counting inversions directly.
int sort_sign(const std::vector<int>& xs) {
  int inv = 0;
  for (size_t a = 0; a < xs.size(); ++a)
    for (size_t b = a + 1; b < xs.size(); ++b)
      if (xs[a] > xs[b]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

std::vector<int> indices(Subset s) {
  std::vector<int> out;
  for (int k = 0; k < 32; ++k)
    if (s & (Subset{1} << k)) out.push_back(k);
  return out;
}

// Oracle for the pairing of e^A (a form) with e_B (a polyvector) under
// form ⌟ (w_1 ∧ ... ∧ w_k) = ι_{w_k} ... ι_{w_1}: with A = B as sets, peeling
// b_1 first from e^{b_1 ... b_k} gives +1 each time.
Rational pairing_oracle(Subset a, Subset b) { return a == b ? 1 : 0; }

Exterior random_homogeneous(std::mt19937& rng, int n, int k) {
  std::uniform_int_distribution<int> c(-3, 3);
  Exterior e(n);
  for (Subset s : exterior_basis(n, k)) e += Exterior::basis(n, s, c(rng));
  return e;
}

}  // namespace

TEST_CASE("exterior basis is lexicographic on sorted index lists", "[gradedpair]") {
  const auto b = exterior_basis(4, 2);
  REQUIRE(b.size() == 6);
  std::vector<std::vector<int>> lists;
  for (Subset s : b) lists.push_back(indices(s));
  CHECK(lists == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(exterior_basis(3, 0) == std::vector<Subset>{0});
  CHECK(exterior_basis(3, 4).empty());
}

TEST_CASE("wedge signs agree with inversion counting", "[gradedpair][property]") {
  const int n = 5;
  for (Subset a = 0; a < (1u << n); ++a)
    for (Subset b = 0; b < (1u << n); ++b) {
      if (a & b) {
        CHECK(wedge_sign(a, b) == 0);
        continue;
      }
      auto xs = indices(a);
      const auto ys = indices(b);
      xs.insert(xs.end(), ys.begin(), ys.end());
      CHECK(wedge_sign(a, b) == sort_sign(xs));
    }
}

TEST_CASE("exterior algebra is graded commutative and associative", "[gradedpair][property]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4;
    std::uniform_int_distribution<int> kd(0, n);
    const int ka = kd(rng), kb = kd(rng), kc = kd(rng);
    const Exterior a = random_homogeneous(rng, n, ka), b = random_homogeneous(rng, n, kb),
                   c = random_homogeneous(rng, n, kc);
    CHECK(wedge(a, b) == Rational(koszul_sign(ka, kb)) * wedge(b, a));
    CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
  }
  CHECK(Exterior::product(3, {2, 0}) == Exterior::basis(3, 0b101, -1));
  CHECK(Exterior::product(3, {1, 1}).is_zero());
}

TEST_CASE("contraction matches the pairing oracle and composes with wedge", "[gradedpair][property]") {
  const int n = 4;
  for (int k = 0; k <= n; ++k)
    for (Subset a : exterior_basis(n, k))
      for (Subset b : exterior_basis(n, k))
        CHECK(reduced_contraction(Exterior::basis(n, a), Exterior::basis(n, b)) == pairing_oracle(a, b));

  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> kd(0, n);
    const Exterior alpha = random_homogeneous(rng, n, kd(rng));
    const Exterior u = random_homogeneous(rng, n, kd(rng) / 2), v = random_homogeneous(rng, n, kd(rng) / 2);
    CHECK(contract(contract(alpha, u), v) == contract(alpha, wedge(u, v)));
  }
}

TEST_CASE("ev_q examples", "[gradedpair]") {
  const VectorQ v = vec({1, 2}), w = vec({1, 2});  // w(v) = 5
  CHECK(ev_q(0, v, 0, w) == 5);
  CHECK(ev_q(1, v, -1, w) == -5);
  CHECK(ev_q(1, v, 0, w) == 0);
  CHECK(ev_q(-2, v, 2, w) == 5);
  // Over Z/2 the dual of Q^1 sits in degree 1.
  CHECK(ev_q(1, v, 1, w, Grading::mod2) == -5);
  CHECK(ev_q(1, v, 0, w, Grading::mod2) == 0);
}

TEST_CASE("ev_q is a perfect pairing on each fiber", "[gradedpair][property]") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    GradedSpace q;
    q.grading = trial % 4 == 0 ? Grading::mod2 : Grading::integer;
    std::uniform_int_distribution<int> deg(-3, 3);
    std::uniform_int_distribution<Index> dim(0, 3);
    for (int c = 0; c < 4; ++c) {
      const int i = q.grading == Grading::mod2 ? c % 2 : deg(rng);
      q.dims[i] = dim(rng);
    }
    const MatrixQ m = ev_matrix(q);
    REQUIRE(m.rows() == q.total());
    // Signed permutation: exactly one ±1 per row and per column.
    for (Index r = 0; r < m.rows(); ++r) {
      int nonzero = 0;
      for (Index c = 0; c < m.cols(); ++c)
        if (m(r, c) != 0) {
          ++nonzero;
          CHECK((m(r, c) == 1 || m(r, c) == -1));
        }
      CHECK(nonzero == 1);
    }
    for (Index c = 0; c < m.cols(); ++c) {
      int nonzero = 0;
      for (Index r = 0; r < m.rows(); ++r) nonzero += m(r, c) != 0;
      CHECK(nonzero == 1);
    }
    CHECK(rank<Rational>(m) == m.rows());
    // Determinant of a signed permutation is ±1.
    if (m.rows() > 0) CHECK(abs(determinant(m)) == 1);
  }
}

TEST_CASE("serre_pair examples and degree law", "[gradedpair]") {
  const int d = 2;
  const int n = 2 * d;  // dz1 dz2 dzbar1 dzbar2
  const Exterior dz1 = Exterior::basis(n, 0b0001), dzb2 = Exterior::basis(n, 0b1000);
  const VectorQ v = vec({2, 1}), w = vec({1, 3});  // w(v) = 5

  SECTION("i = 0 reduces to w(v) ω1 ∧ ω2") {
    const auto out = serre_pair({1, 0, 0, dz1, v}, {0, 1, 0, dzb2, w});
    CHECK(out.p == 1);
    CHECK(out.q == 1);
    CHECK(out.degree == 0);
    CHECK(out.form == Rational(5) * wedge(dz1, dzb2));
  }
  SECTION("i = 1 against a function-valued dual costs a sign") {
    const auto out = serre_pair({1, 0, 1, dz1, v}, {0, 0, -1, Exterior::unit(n), w});
    CHECK(out.form == Rational(-5) * dz1);
  }
  SECTION("mismatched degrees give zero") {
    const auto out = serre_pair({1, 0, 1, dz1, v}, {0, 1, 0, dzb2, w});
    CHECK(out.form.is_zero());
    CHECK(out.p == 1);
    CHECK(out.q == 1);
  }
}

TEST_CASE("serre_pair factors as ev_q times a Koszul sign", "[gradedpair][property]") {
  std::mt19937 rng(17);
  const int d = 3, n = 2 * d;
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> pq(0, d), deg(-2, 2), c(-3, 3);
    TriGraded a, b;
    a.p = pq(rng); a.q = pq(rng); a.degree = deg(rng);
    b.p = pq(rng); b.q = pq(rng); b.degree = trial % 2 ? -a.degree : deg(rng);
    // Holomorphic part on generators [0,d), antiholomorphic on [d,2d).
    auto form = [&](int p, int q) {
      std::vector<int> idx;
      std::vector<int> hol(d), ahol(d);
      for (int k = 0; k < d; ++k) hol[k] = k, ahol[k] = d + k;
      std::shuffle(hol.begin(), hol.end(), rng);
      std::shuffle(ahol.begin(), ahol.end(), rng);
      idx.insert(idx.end(), hol.begin(), hol.begin() + p);
      idx.insert(idx.end(), ahol.begin(), ahol.begin() + q);
      return Exterior::product(n, idx);
    };
    a.form = form(a.p, a.q);
    b.form = form(b.p, b.q);
    a.value = VectorQ(2);
    b.value = VectorQ(2);
    for (Index k = 0; k < 2; ++k) a.value(k) = c(rng), b.value(k) = c(rng);

    const auto out = serre_pair(a, b);
    CHECK(out.p == a.p + b.p);
    CHECK(out.q == a.q + b.q);
    CHECK(out.degree == 0);
    // Move v past ω2 (Koszul sign), then apply ev_q.
    const Rational scale = koszul_sign(a.degree, b.p + b.q) * ev_q(a.degree, a.value, b.degree, b.value);
    CHECK(out.form == scale * wedge(a.form, b.form));
    if (!out.form.is_zero()) CHECK(out.form.degree() == out.p + out.q);
    // Moving v across ω2 and back is the identity on signs.
    CHECK(koszul_sign(a.degree, b.p + b.q) * koszul_sign(b.p + b.q, a.degree) == 1);
  }
}

TEST_CASE("reduced contraction identity examples", "[gradedpair]") {
  SECTION("d = 1, v1 = 1, v2 = ∂x, Ω = dx") {
    const auto c = reduced_contraction_identity_check(1, Exterior::basis(1, 1), Exterior::unit(1),
                                                      Exterior::basis(1, 1));
    CHECK(c.lhs == 1);
    CHECK(c.rhs == 1);
    CHECK(c.holds);
  }
  SECTION("degree mismatch gives zero on both sides") {
    const auto c = reduced_contraction_identity_check(2, Exterior::basis(2, 0b11), Exterior::basis(2, 0b01),
                                                      Exterior::unit(2));
    CHECK(c.lhs == 0);
    CHECK(c.rhs == 0);
    CHECK(c.holds);
  }
  SECTION("d = 2, v1 = ∂x, v2 = ∂y, Ω = dx ∧ dy") {
    const auto c = reduced_contraction_identity_check(2, Exterior::basis(2, 0b11), Exterior::basis(2, 0b01),
                                                      Exterior::basis(2, 0b10));
    CHECK(c.lhs == 1);
    CHECK(c.rhs == 1);
    CHECK(c.holds);
  }
}

TEST_CASE("reduced contraction identity on random inputs", "[gradedpair][property]") {
  std::mt19937 rng(23);
  for (int d = 1; d <= 4; ++d)
    for (int trial = 0; trial < 25; ++trial) {
      std::uniform_int_distribution<int> kd(0, d), c(-4, 4);
      const int k1 = kd(rng);
      const int k2 = trial % 3 == 0 ? kd(rng) : d - k1;
      const Exterior omega = Exterior::basis(d, (Subset{1} << d) - 1, c(rng));
      const auto check = reduced_contraction_identity_check(d, omega, random_homogeneous(rng, d, k1),
                                                            random_homogeneous(rng, d, k2));
      CHECK(check.holds);
      if (k1 + k2 != d) CHECK(check.lhs == 0);
    }
}

TEST_CASE("reduced contraction check rejects malformed inputs", "[gradedpair]") {
  const Exterior mixed = Exterior::unit(2) + Exterior::basis(2, 1);
  CHECK_THROWS_AS(reduced_contraction_identity_check(2, Exterior::basis(2, 0b11), mixed, Exterior::unit(2)),
                  InvalidArgument);
  CHECK_THROWS_AS(reduced_contraction_identity_check(2, Exterior::basis(2, 0b01), Exterior::unit(2),
                                                     Exterior::unit(2)),
                  InvalidArgument);
}
