#pragma once

// Finite linear categories given by structure constants: the cohomology
// category of matrix factorizations, supercompletion along an involution,
// the even subcategory, and the Serre-functor criterion.

#include "lgtrace/boundary.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lgtrace {

/// Objects, graded Hom bases and composition constants. The basis of
/// Hom(a, b) lists even elements first; an ungraded table has no odd ones.
struct CategoryTable {
  std::vector<std::string> objects;
  /// dims[a][b] = {even, odd}.
  std::vector<std::vector<std::array<Index, 2>>> dims;
  /// composition[a][b][c] has dim(a, c) rows and dim(b, c) * dim(a, b)
  /// columns; column i * dim(a, b) + j holds g_i ∘ f_j.
  std::vector<std::vector<std::vector<MatrixQ>>> composition;
  /// Coordinates of id_a in End(a).
  std::vector<VectorQ> identity;

  size_t size() const { return objects.size(); }
  Index dim(size_t a, size_t b) const { return dims[a][b][0] + dims[a][b][1]; }
  Index dim(size_t a, size_t b, int parity) const { return dims[a][b][static_cast<size_t>(parity)]; }
  /// Parity of basis element k of Hom(a, b).
  int parity(size_t a, size_t b, Index k) const { return k < dims[a][b][0] ? 0 : 1; }
  /// g ∘ f for g in Hom(b, c) and f in Hom(a, b), both as coordinates.
  VectorQ compose(size_t a, size_t b, size_t c, const VectorQ& g, const VectorQ& f) const;
  bool graded() const;
};

/// An endofunctor given on objects and, for every pair, as a matrix
/// Hom(a, b) -> Hom(F a, F b).
struct TableFunctor {
  std::vector<size_t> objects;
  std::vector<std::vector<MatrixQ>> maps;
};

/// Shift data on a graded table: Σ as an even functor, and the isomorphisms
/// ρ: Hom^1(a, b) -> Hom^0(a, Σb).
struct ShiftData {
  TableFunctor sigma;
  std::vector<std::vector<MatrixQ>> rho;
};

struct InvolutiveCategoryTable {
  CategoryTable category;
  TableFunctor sigma;
};

struct SuperCategoryTable {
  CategoryTable category;
  std::optional<ShiftData> shift;
  /// Trace covectors on End(a), when attached.
  std::vector<VectorQ> traces;
  /// The factorizations behind the objects, for tables built from them.
  std::vector<MatrixFactorization> factorizations;
};

struct TableAudit {
  bool associative = true;
  bool unital = true;
  bool parity_additive = true;

  bool ok() const { return associative && unital && parity_additive; }
};

/// Exhaustive check on all basis triples.
TableAudit audit(const CategoryTable& t);

struct FunctorAudit {
  bool preserves_identity = true;
  bool preserves_composition = true;
  bool even = true;
  /// F(F(a)) = a and F_{Fa,Fb} F_{a,b} = 1.
  bool involutive = true;

  bool ok() const { return preserves_identity && preserves_composition && even && involutive; }
};

FunctorAudit audit(const CategoryTable& t, const TableFunctor& f);

struct NamedFactorization {
  std::string name;
  MatrixFactorization mf;
};

/// The cohomology category on the given objects. With `close_under_shift`,
/// Σa is appended (named "S(name)") whenever it is not already an object, so
/// the shift is always available. Traces are the boundary traces of the
/// representatives. Throws MismatchedPotential for mixed W and
/// PreconditionFailed if a built table fails its audit.
SuperCategoryTable build_hdf_category(const std::vector<NamedFactorization>& objects, const BulkFunctional& bulk,
                                      const BackendChoice& backend, bool close_under_shift = true);

/// Hom^κ(a, b) = Hom(a, Σ^κ b) with g ∘ f = Σ^κ(g) ∘ f. Throws NotInvolutive
/// when Σ is not a strict involutive functor.
SuperCategoryTable supercompletion(const InvolutiveCategoryTable& c);

/// Even morphisms with Σ restricted. Throws PreconditionFailed without shift.
InvolutiveCategoryTable even_subcategory(const SuperCategoryTable& t);

/// Entrywise equality of two tables with the same object order.
bool same_table(const CategoryTable& a, const CategoryTable& b);
bool same_functor(const TableFunctor& a, const TableFunctor& b);

/// Comparison of t with Gr(Ev(t)) through Θ = 1 on even morphisms and
/// i·ρ on odd ones. Phases are tracked symbolically, so the check on
/// g ∘ f for parities (ν, κ) reduces to ρ(g ∘ f) = (-1)^{κν} ρ(g) ∘ ρ(f).
struct RoundTripReport {
  bool dims_match = false;
  bool rho_invertible = false;
  bool identities_match = false;
  /// Θ commutes with composition (with the i phase).
  bool composition_match = false;
  /// Same check with Θ = ρ and no phase; fails as soon as two odd classes
  /// compose to a nonzero class.
  bool untwisted_composition_match = false;
  /// Θ Σ = Gr(Σ) Θ strictly. Since ρ is built from the grading of the
  /// source, which flips under Σ, this holds only up to the parity sign.
  bool shift_match = false;
  /// Θ Σ = Gr(Σ) Θ (-1)^κ on Hom^κ.
  bool shift_match_up_to_parity = false;

  bool ok() const {
    return dims_match && rho_invertible && identities_match && composition_match && shift_match_up_to_parity;
  }
};

RoundTripReport compare_with_gr_ev(const SuperCategoryTable& t);

/// Ev(Gr(c)) = c on the nose.
bool ev_gr_identity(const InvolutiveCategoryTable& c);

struct SerrePairVerdict {
  size_t a = 0, b = 0;
  /// tr_a(g ∘ f) = tr_b(S(f) ∘ g) on all basis pairs.
  bool identity_holds = true;
  /// ⟨f, g⟩ = tr_b(S(f) ∘ g) on Hom^0(a, b) x Hom^0(b, S a).
  MatrixQ pairing;
  Index rank = 0;
  bool nondegenerate = false;
};

struct SerreReport {
  int signature = 0;
  std::vector<SerrePairVerdict> pairs;
  bool passed = false;
};

/// S = Σ^d on the even subcategory: Σ for d odd, the identity for d even.
/// For d odd the trace on Hom^0(a, Σa) is tr_a ∘ ρ^{-1}. Requires traces, and
/// shift data when d is odd.
SerreReport serre_check(const SuperCategoryTable& t, int d);

/// Traces vanish on End(a) components of parity different from d mod 2.
bool traces_have_parity(const SuperCategoryTable& t, int d);

}  // namespace lgtrace
