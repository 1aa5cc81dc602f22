#pragma once

// Bulk sector of an affine polynomial model: Jacobian ideal, Milnor algebra,
// truncated Koszul cohomology, trace covectors and their Gram matrices.

#include "lgtrace/gradedpair.hpp"
#include "lgtrace/groebner.hpp"
#include "lgtrace/homology.hpp"
#include "lgtrace/multipoly.hpp"
#include "lgtrace/poly_uni.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lgtrace {

/// Polynomial potential on affine d-space.
struct LGPair {
  Ring ring;
  MultiPoly potential;

  /// Throws InvalidArgument for a constant potential or one using more
  /// variables than the ring has.
  LGPair(Ring r, MultiPoly w);

  size_t dimension() const { return ring.size(); }
  /// d mod 2.
  int signature() const { return static_cast<int>(ring.size() % 2); }
};

struct JacobianData {
  std::vector<MultiPoly> partials;
  GroebnerBasis basis;
  bool zero_dimensional = false;
};

JacobianData jacobian_ideal(const LGPair& pair);

struct CriticalLocus {
  bool finite = false;
  /// Milnor number when finite.
  std::optional<size_t> milnor_number;
};

CriticalLocus critical_locus_finite(const JacobianData& jd);

/// Laplace expansion; fine for the small sizes used here.
MultiPoly expand_determinant(const MatrixPoly& m);

/// Determinant of the matrix of second partials.
MultiPoly hessian(const LGPair& pair);

/// Quotient of the polynomial ring by the Jacobian ideal.
class MilnorAlgebra {
 public:
  explicit MilnorAlgebra(JacobianData jd);

  const JacobianData& jacobian() const { return jd_; }
  const std::vector<Monomial>& basis() const { return basis_; }
  size_t dimension() const { return basis_.size(); }
  MultiPoly basis_element(size_t k) const { return MultiPoly(basis_[k], 1); }

  MultiPoly reduce(const MultiPoly& f) const { return normal_form(f, jd_.basis); }
  /// Coordinates of the normal form on the standard monomial basis.
  VectorQ coordinates(const MultiPoly& f) const;
  MultiPoly element(const VectorQ& coords) const;

  /// Coordinates of basis[a] * basis[b].
  const VectorQ& product(size_t a, size_t b) const { return table_[a][b]; }
  VectorQ multiply(const VectorQ& u, const VectorQ& v) const;
  VectorQ unit() const;

  bool is_commutative() const;
  bool is_associative() const;
  bool has_unit() const;

 private:
  JacobianData jd_;
  std::vector<Monomial> basis_;
  std::map<Monomial, size_t> index_;
  std::vector<std::vector<VectorQ>> table_;
};

/// Throws NotZeroDimensional when the critical locus is not finite.
MilnorAlgebra milnor_algebra(const JacobianData& jd);

// ---------------------------------------------------------------------------
// Koszul complex

struct KoszulLevel {
  int bound = 0;
  /// k -> dim H^k for k in [-d, 0].
  std::map<int, Index> dims;
};

struct KoszulReport {
  /// Variable weights making the truncation a subcomplex (all ones unless
  /// the potential is quasi-homogeneous for other positive weights).
  std::vector<int> weights;
  KoszulLevel at_bound;
  KoszulLevel at_next;  // bound + deg W
  bool stabilized = false;
};

/// Positive integer weights for which every monomial of W has the same
/// weighted degree, if there are any; otherwise all ones.
std::vector<int> grading_weights(const LGPair& pair);

/// Truncated Koszul complex with Λ^k in degree -k. A basis element f ∂_I has
/// weight wdeg f - w(I) + |I| wdeg W, kept when at most N·min(w); contraction
/// with dW cannot raise that weight, so this is a subcomplex. For all-ones
/// weights the Λ^0 part is exactly the polynomials of degree ≤ N.
struct KoszulComplex {
  std::vector<int> weights;
  /// Weighted degree of W, the same for every monomial when `graded`.
  int top = 0;
  bool graded = false;
  FiniteComplex complex;
  /// bases[k] lists (coefficient monomial, wedge subset) spanning Λ^k.
  std::vector<std::vector<std::pair<Monomial, Subset>>> bases;
  /// Weight of each basis element; the differential preserves it when graded.
  std::vector<std::vector<int>> labels;
};

KoszulComplex koszul_complex(const LGPair& pair, int bound);

/// Cohomology of the Koszul complex of (∂_1 W, ..., ∂_d W) on polyvectors
/// (Λ^k in degree -k, differential contraction with dW), truncated so that
/// the coefficients of Λ^0 have degree ≤ N. Requires N ≥ deg W.
KoszulReport koszul_cohomology_truncated(const LGPair& pair, int bound);

// ---------------------------------------------------------------------------
// Traces

enum class TraceBackend { residue, socle };

TraceBackend parse_backend(const std::string& name);
std::string to_string(TraceBackend b);

/// Sum of local Grothendieck residues of f dx / (∂_1 W ... ∂_d W). Uses the
/// transformation law with the minimal polynomial of each coordinate in the
/// Milnor algebra, which is x_i^{N_i} when the critical locus is the origin.
class GlobalResidue {
 public:
  explicit GlobalResidue(const MilnorAlgebra& ma);

  Rational operator()(const MultiPoly& f) const;

  /// Minimal polynomial of x_i on the Milnor algebra, lowest degree first.
  const std::vector<PolyUni>& minimal_polynomials() const { return minpoly_; }
  const MultiPoly& transition_determinant() const { return det_; }

 private:
  std::vector<PolyUni> minpoly_;
  MultiPoly det_;
};

struct BulkTrace {
  TraceBackend backend = TraceBackend::residue;
  Rational scale = 1;
  /// Values on the Milnor algebra basis.
  VectorQ covector;

  Rational operator()(const VectorQ& coords) const;
};

/// Throws NotZeroDimensional (via the algebra) and PreconditionFailed when
/// the socle backend meets a socle that is not one-dimensional.
BulkTrace bulk_trace(const MilnorAlgebra& ma, TraceBackend backend, const Rational& scale = 1);

/// Basis of the annihilator of the coordinate functions, as columns.
MatrixQ socle(const MilnorAlgebra& ma);

struct BulkGram {
  MatrixQ gram;
  Rational determinant;
  bool nondegenerate = false;
};

BulkGram bulk_gram(const MilnorAlgebra& ma, const BulkTrace& tr);

}  // namespace lgtrace
