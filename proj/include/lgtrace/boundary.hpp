#pragma once

// Matrix factorizations, their 2-periodic Hom complexes, exact cohomology,
// supertraces and the residue (Kapustin-Li) boundary trace.

#include "lgtrace/bulk.hpp"
#include "lgtrace/multipoly.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace lgtrace {

/// E = E^0 ⊕ E^1 of ranks (r0 | r1) with D = [[0, G], [F, 0]], F: E^0 -> E^1
/// and G: E^1 -> E^0. Basis order is even block first.
struct MatrixFactorization {
  Ring ring;
  MultiPoly potential;
  MatrixPoly f;  // r1 x r0
  MatrixPoly g;  // r0 x r1

  Index even_rank() const { return f.cols(); }
  Index odd_rank() const { return f.rows(); }
  Index rank() const { return f.rows() + f.cols(); }
  /// Parity of basis vector k.
  int parity(Index k) const { return k < even_rank() ? 0 : 1; }

  MatrixPoly differential() const;
  /// diag(I_{r0}, -I_{r1}).
  MatrixPoly grading() const;

  friend bool operator==(const MatrixFactorization& a, const MatrixFactorization& b) {
    return a.potential == b.potential && a.f == b.f && a.g == b.g;
  }
};

/// Throws InvalidArgument on inconsistent block shapes and
/// NotAFactorization when G F or F G differs from W times the identity.
MatrixFactorization mf_validate(const Ring& ring, const MultiPoly& w, MatrixPoly f, MatrixPoly g);

/// External tensor product, factorizing W_a + W_b. Both factors must live in
/// the same ring. Even part (a0⊗b0, a1⊗b1), odd part (a0⊗b1, a1⊗b0).
MatrixFactorization tensor_mf(const MatrixFactorization& a, const MatrixFactorization& b);

/// Σ(E, D) = (ΠE, ΠD): swapped ranks and blocks.
MatrixFactorization shift_mf(const MatrixFactorization& a);

/// Π on a morphism s: E1 -> E2, the block swap [[s11, s10], [s01, s00]].
/// `source` and `target` are the unshifted factorizations.
MatrixPoly shift_morphism(const MatrixPoly& s, const MatrixFactorization& source,
                          const MatrixFactorization& target);

// ---------------------------------------------------------------------------
// Hom complexes

/// Hom(E1, E2) split by parity. Cochains of parity κ are flattened over
/// `slots[κ]` (row-major positions of the parity-κ entries), and
/// `differential[κ]` maps parity κ to parity κ+1 on those coordinates.
struct HomComplex {
  MatrixFactorization source;
  MatrixFactorization target;
  std::array<std::vector<std::pair<Index, Index>>, 2> slots;
  std::array<MatrixPoly, 2> differential;

  /// 𝔡(s) = D2 s - (-1)^κ s D1.
  MatrixPoly apply(const MatrixPoly& s, int parity) const;
  std::vector<MultiPoly> flatten(const MatrixPoly& s, int parity) const;
  MatrixPoly unflatten(const std::vector<MultiPoly>& v, int parity) const;
  /// Parity of the (row, col) entry.
  int parity(Index row, Index col) const { return (target.parity(row) + source.parity(col)) % 2; }
  bool is_homogeneous(const MatrixPoly& s, int parity) const;
  bool is_cocycle(const MatrixPoly& s, int parity) const;
};

/// Throws MismatchedPotential when the factorizations have different W.
HomComplex hom_complex(const MatrixFactorization& source, const MatrixFactorization& target);

enum class CohomologyBackend { snf, truncate };

struct BackendChoice {
  CohomologyBackend kind = CohomologyBackend::snf;
  /// Degree bound for the truncate backend.
  int truncation = 8;
};

BackendChoice parse_cohomology_backend(const std::string& name, int truncation);
std::string to_string(CohomologyBackend b);

/// Finite-dimensional cohomology of a Hom complex with chosen cocycle
/// representatives and a reduction map onto their span.
class HDFCohomology {
 public:
  struct Impl;

  Index dim(int parity) const { return static_cast<Index>(reps_[static_cast<size_t>(parity)].size()); }
  const std::vector<MatrixPoly>& representatives(int parity) const { return reps_[static_cast<size_t>(parity)]; }
  /// Coordinates of the class of a cocycle. Throws NotACocycle, and
  /// NotStabilized when a truncated backend cannot express it.
  VectorQ reduce(const MatrixPoly& cocycle, int parity) const;

  CohomologyBackend backend() const { return backend_; }
  /// Truncate backend: dimensions at the bound and at bound + deg W agree.
  bool stabilized() const { return stabilized_; }
  const std::array<Index, 2>& next_dims() const { return next_dims_; }

 private:
  friend HDFCohomology hdf_cohomology(const HomComplex& h, const BackendChoice& backend);
  HomComplex complex_;
  CohomologyBackend backend_ = CohomologyBackend::snf;
  std::array<std::vector<MatrixPoly>, 2> reps_;
  bool stabilized_ = true;
  std::array<Index, 2> next_dims_{0, 0};
  std::shared_ptr<const Impl> impl_;
};

/// Throws BackendUnavailable for the snf backend on a multivariate ring.
HDFCohomology hdf_cohomology(const HomComplex& h, const BackendChoice& backend);

struct HomSpace {
  HomComplex complex;
  HDFCohomology cohomology;
};

HomSpace hom_space(const MatrixFactorization& source, const MatrixFactorization& target,
                   const BackendChoice& backend);

struct ComposedClass {
  MatrixPoly cocycle;
  int parity = 0;
  VectorQ coordinates;
};

/// g ∘ f for f in Hom(a, b) and g in Hom(b, c); the class is read off in
/// `ac` = Hom(a, c). Throws NotACocycle.
ComposedClass compose(const HomSpace& bc, const MatrixPoly& g, int g_parity, const HomSpace& ab,
                      const MatrixPoly& f, int f_parity, const HomSpace& ac);

// ---------------------------------------------------------------------------
// Traces

/// Bulk trace extended to polynomials through normal forms.
class BulkFunctional {
 public:
  BulkFunctional(const LGPair& pair, TraceBackend backend, const Rational& scale = 1);

  Rational operator()(const MultiPoly& f) const { return trace_(algebra_.coordinates(f)); }
  const LGPair& pair() const { return pair_; }
  const MilnorAlgebra& algebra() const { return algebra_; }
  const BulkTrace& trace() const { return trace_; }

 private:
  LGPair pair_;
  MilnorAlgebra algebra_;
  BulkTrace trace_;
};

/// tr of the even block minus tr of the odd block.
MultiPoly supertrace(const MatrixPoly& m, Index even_rank);

/// Σ_σ sgn σ ∂_{σ1} D ... ∂_{σd} D. Requires d ≤ 3.
MatrixPoly antisymmetrized_derivatives(const MatrixFactorization& a);

/// (1/d!) λ(str(t ∂_1 D ∧ ... ∧ ∂_d D)). Throws MismatchedPotential and, for
/// d > 3, PreconditionFailed.
Rational boundary_trace(const MatrixFactorization& a, const MatrixPoly& t, const BulkFunctional& bulk);

struct BoundaryGram {
  /// Rows: basis of H(a1, a2), even then odd. Columns: basis of H(a2, a1).
  MatrixQ gram;
  std::array<Index, 2> row_dims{0, 0};
  std::array<Index, 2> col_dims{0, 0};
  Index rank = 0;
  /// Square and invertible (vacuously true when empty).
  bool nondegenerate = false;
  /// Blocks with κ1 + κ2 ≠ d mod 2 vanish.
  bool parity_selection = false;
  /// ⟨t1, t2⟩ = (-1)^{κ1 κ2} ⟨t2, t1⟩ entrywise.
  bool cyclic = false;
};

/// ⟨t1, t2⟩ = tr_{a2}(t1 t2) for t1 in H(a1, a2) and t2 in H(a2, a1).
BoundaryGram boundary_gram(const HomSpace& forward, const HomSpace& backward, const BulkFunctional& bulk);

}  // namespace lgtrace
