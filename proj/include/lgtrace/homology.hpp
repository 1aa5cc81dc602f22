#pragma once

// Bounded cochain complexes and double complexes of finite-dimensional
// rational vector spaces, their cohomology, and the spectral sequence of the
// column filtration.

#include "lgtrace/exact.hpp"

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace lgtrace {

/// Cochain complex concentrated in degrees [lo, lo + dims.size() - 1].
/// differentials[k] maps node(lo + k) to node(lo + k + 1).
struct FiniteComplex {
  int lo = 0;
  std::vector<Index> dims;
  std::vector<MatrixQ> differentials;

  FiniteComplex() = default;
  FiniteComplex(int lowest, std::vector<Index> node_dims, std::vector<MatrixQ> maps);
  /// All differentials zero.
  static FiniteComplex zero_maps(int lowest, std::vector<Index> node_dims);

  int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
  /// 0 outside the support.
  Index dim(int degree) const;
  /// Differential leaving `degree`; a correctly shaped zero matrix outside.
  MatrixQ differential(int degree) const;
  /// Throws InvalidArgument on a shape mismatch or a nonzero square.
  void validate() const;
};

/// H^k with chosen cocycle representatives (columns) and a projection that
/// takes a cocycle to its coordinates on them, killing coboundaries.
struct CohomologyGroup {
  int degree = 0;
  Index dim = 0;
  MatrixQ representatives;
  MatrixQ projection;
  MatrixQ cocycles;
  MatrixQ coboundaries;
};

std::vector<CohomologyGroup> cohomology(const FiniteComplex& c);

/// Node k of the dual is the dual of node -k; the differential at k is the
/// transpose of the differential leaving -k-1.
FiniteComplex dual_complex(const FiniteComplex& c);

using Bidegree = std::pair<int, int>;  // (p, q): p horizontal, q vertical

/// Double complex on a finite set of positions. `vertical` maps (p,q) to
/// (p,q+1), `horizontal` maps (p,q) to (p+1,q); missing maps are zero. The
/// two differentials commute, and the total differential is
/// vertical + (-1)^q horizontal, which squares to zero for commuting maps.
struct DoubleComplex {
  std::map<Bidegree, Index> dims;
  std::map<Bidegree, MatrixQ> vertical;
  std::map<Bidegree, MatrixQ> horizontal;

  Index dim(int p, int q) const;
  MatrixQ vertical_map(int p, int q) const;
  MatrixQ horizontal_map(int p, int q) const;
  /// Bounding box of the positions with nonzero dimension, or nullopt when empty.
  std::optional<std::pair<Bidegree, Bidegree>> bounds() const;
  /// Throws InvalidArgument on shape mismatches, nonzero squares or
  /// non-commuting squares.
  void validate() const;
};

enum class Support { first_quadrant, strip };

/// First quadrant when p, q >= 0 everywhere; a horizontal strip when only
/// q >= 0. Throws InvalidSupport otherwise.
Support classify_support(const DoubleComplex& k);

/// Total complex with the layout of each total degree: blocks ordered by
/// increasing p, block (p, n-p) starting at offsets[n][p].
struct TotalComplex {
  FiniteComplex complex;
  std::map<int, std::map<int, Index>> offsets;

  /// Coordinates of degree n lying in columns p' >= p (the filtration F^p).
  std::vector<Index> filtration_coords(int n, int p) const;
};

TotalComplex total_complex(const DoubleComplex& k);

struct PageEntry {
  Index dim = 0;
  /// Cocycle representatives in the coordinates of the total degree p+q.
  MatrixQ representatives;
  /// From total-degree coordinates (restricted to Z_r) to entry coordinates.
  MatrixQ projection;
};

/// Page r with its differential d_r : E_r^{p,q} -> E_r^{p+r, q-r+1}.
struct SpectralPage {
  int r = 0;
  std::map<Bidegree, PageEntry> entries;
  std::map<Bidegree, MatrixQ> differential;

  Index dim(int p, int q) const;
};

struct FilteredDegree {
  int n = 0;
  Index dim = 0;
  /// dim F^p H^n for every p in the column range plus one past the end.
  std::map<int, Index> filtration;
  /// dim F^p H^n / F^{p+1} H^n.
  std::map<int, Index> graded;
};

struct FilteredCohomology {
  std::vector<FilteredDegree> degrees;
  const FilteredDegree* at(int n) const;
};

struct SpectralSequence {
  Support support = Support::first_quadrant;
  std::vector<SpectralPage> pages;
  /// Smallest r with d_s = 0 for all s >= r; pages.back() is E_infinity.
  int stable_page = 0;
  FilteredCohomology abutment;
};

/// Pages from the subquotient description
///   E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}),  Z_r^p = F^p ∩ d^{-1} F^{p+r}.
/// Throws NotStabilized when the pages still move after r_max and
/// InvalidSupport when the support is not first-quadrant or a strip.
SpectralSequence spectral_pages(const DoubleComplex& k, int r_max);

/// Nodewise map of double complexes.
struct DoubleComplexMap {
  DoubleComplex source;
  DoubleComplex target;
  std::map<Bidegree, MatrixQ> components;

  MatrixQ component(int p, int q) const;
};

struct FilteredVerdict {
  int p = 0;
  int n = 0;
  bool preserves_filtration = false;
  bool graded_isomorphism = false;
};

struct FilteredComparison {
  std::vector<FilteredVerdict> verdicts;
  /// dim H^n of source and target per total degree; reported separately.
  std::map<int, std::pair<Index, Index>> total_dims;
  bool all_isomorphisms() const;
};

/// Compares column filtrations on total cohomology along an injective map
/// that is a quasi-isomorphism on every column. Throws PreconditionFailed
/// when injectivity, compatibility with both differentials or the column
/// quasi-isomorphism condition fails, or when the supports differ in kind.
FilteredComparison filtered_compare(const DoubleComplexMap& tau);

/// Double complex that is 2-periodic in p: columns depend only on p mod 2
/// and rows run over q = 0..height-1.
struct PeriodicDoubleComplex {
  int height = 0;
  std::array<std::vector<Index>, 2> dims;
  /// vertical[parity][q] : (parity, q) -> (parity, q+1)
  std::array<std::vector<MatrixQ>, 2> vertical;
  /// horizontal[parity][q] : (parity, q) -> (1-parity, q)
  std::array<std::vector<MatrixQ>, 2> horizontal;
};

struct PeriodicWindow {
  int n_lo = -2;
  int n_hi = 3;
  DoubleComplex materialized;
  SpectralSequence spectral;
  /// dim H^n for n in [n_lo, n_hi], exact for the infinite complex.
  std::map<int, Index> total_dims;
  /// H^n and H^{n+2} agree on every pair inside the window.
  bool periodic = false;
};

/// Materializes enough columns that total degrees [n_lo, n_hi] see the
/// full infinite complex, then runs the spectral sequence on it.
PeriodicWindow unwind_periodic(const PeriodicDoubleComplex& k, int n_lo = -2, int n_hi = 3,
                               int r_max = 32);

}  // namespace lgtrace
