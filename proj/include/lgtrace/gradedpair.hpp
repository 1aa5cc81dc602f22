#pragma once

// Fiberwise sign identities: the graded duality morphism, the graded Serre
// pairing and contraction of forms by polyvectors, all on finite-dimensional
// exterior algebras with explicit subset bases.

#include "lgtrace/exact.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace lgtrace {

/// Index subset of the generators, bit k standing for generator k.
using Subset = std::uint32_t;

/// Size-k subsets of n generators in lexicographic order of their sorted
/// index lists.
std::vector<Subset> exterior_basis(int n, int k);

/// Sign of e_A ∧ e_B against e_{A∪B}; 0 when A and B overlap.
int wedge_sign(Subset a, Subset b);

/// (-1)^(a*b).
inline int koszul_sign(int a, int b) { return ((a * b) % 2 == 0) ? 1 : -1; }

/// Element of the exterior algebra on n generators.
class Exterior {
 public:
  explicit Exterior(int generators = 0) : n_(generators) {}
  static Exterior unit(int generators);
  static Exterior basis(int generators, Subset s, const Rational& c = 1);
  /// Product of the listed generators in the given order.
  static Exterior product(int generators, const std::vector<int>& indices);

  int generators() const { return n_; }
  const std::map<Subset, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Degree of a nonzero homogeneous element.
  std::optional<int> degree() const;
  Rational coeff(Subset s) const;
  /// Coordinates on exterior_basis(n, k).
  VectorQ coordinates(int k) const;

  Exterior& operator+=(const Exterior& o);
  Exterior& operator*=(const Rational& c);
  friend Exterior operator+(Exterior a, const Exterior& b) { return a += b; }
  friend Exterior operator*(const Rational& c, Exterior a) { return a *= c; }
  friend bool operator==(const Exterior& a, const Exterior& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  int n_;
  std::map<Subset, Rational> terms_;
};

Exterior wedge(const Exterior& a, const Exterior& b);

/// Interior product of a form by one generator's dual vector.
Exterior interior(int generator, const Exterior& form);

/// Full contraction form ⌟ (w_1 ∧ ... ∧ w_k) = ι_{w_k} ... ι_{w_1} form, so
/// that (α ⌟ u) ⌟ v = α ⌟ (u ∧ v).
Exterior contract(const Exterior& form, const Exterior& polyvector);

/// Degree-zero part of the full contraction; zero unless the polyvector has
/// the same degree as the form.
Rational reduced_contraction(const Exterior& form, const Exterior& polyvector);

// ---------------------------------------------------------------------------
// Graded duality

enum class Grading { integer, mod2 };

/// Finite-dimensional graded vector space by component dimensions.
struct GradedSpace {
  Grading grading = Grading::integer;
  std::map<int, Index> dims;

  Index total() const;
  /// Degree of the dual component pairing with degree i.
  int dual_degree(int i) const { return grading == Grading::mod2 ? ((i % 2) + 2) % 2 : -i; }
};

/// (-1)^i δ_{i+j,0} w(v) for v in Q^i and w in (Q^∨)^j.
Rational ev_q(int i, const VectorQ& v, int j, const VectorQ& w, Grading g = Grading::integer);

/// Matrix of ev_q between Q and Q^∨ in dual bases, components ordered by
/// increasing degree on both sides.
MatrixQ ev_matrix(const GradedSpace& q);

/// ω ⊗ v with ω in Λ^p V* ⊗ Λ^q V̄* and v in Q^degree. The form lives on 2d
/// generators: holomorphic ones first, antiholomorphic ones after.
struct TriGraded {
  int p = 0;
  int q = 0;
  int degree = 0;
  Exterior form;
  VectorQ value;
};

struct FormComponent {
  int p = 0;
  int q = 0;
  /// Always 0: the pairing lands in the ungraded line.
  int degree = 0;
  Exterior form;
};

/// (-1)^{i(p2+q2+1)} δ_{i+j,0} w(v) · ω1 ∧ ω2 where the first argument carries
/// v in Q^i and the second w in (Q^∨)^j.
FormComponent serre_pair(const TriGraded& a, const TriGraded& b, Grading g = Grading::integer);

struct ContractionCheck {
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

/// Checks Ω ⌟₀ (v1 ∧ v2) = (-1)^{k1 d} ev(v1, Ω ⌟ v2) for homogeneous v1, v2 in
/// Λ(Q^d), with Λ^k TX in degree -k and Λ^k T*X in degree k.
ContractionCheck reduced_contraction_identity_check(int d, const Exterior& omega,
                                                    const Exterior& v1, const Exterior& v2);

}  // namespace lgtrace
