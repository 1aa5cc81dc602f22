#pragma once

// Problem files. Statements end with ';' and `#` starts a comment:
//
//   ring x, y;                      variables (required before polynomials)
//   order degrevlex;                lex | grlex | degrevlex
//   W = x^3 + y^3;                  potential
//   mf P = [[x]] | [[x^2]];         factorization F | G, F maps even to odd
//   option scale = 1/2;             backend, scale, truncate, cohomology, window
//   node (0, 0) = 2;                double-complex node dimension
//   d1 (0, 0) = [[1, 0]];           horizontal map (p, q) -> (p+1, q)
//   d2 (0, 0) = [[1], [0]];         vertical map (p, q) -> (p, q+1)

#include "lgtrace/boundary.hpp"
#include "lgtrace/bulk.hpp"
#include "lgtrace/category.hpp"
#include "lgtrace/homology.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lgtrace {

struct ProblemOptions {
  std::optional<TraceBackend> backend;
  std::optional<Rational> scale;
  std::optional<int> truncate;
  std::optional<CohomologyBackend> cohomology;
  /// Total degrees reported by the spectral command.
  std::optional<std::pair<int, int>> window;

  friend bool operator==(const ProblemOptions&, const ProblemOptions&) = default;
};

struct ProblemSpec {
  std::optional<Ring> ring;
  std::optional<MultiPoly> potential;
  std::vector<NamedFactorization> factorizations;
  ProblemOptions options;
  DoubleComplex complex;

  bool has_complex() const { return !complex.dims.empty(); }
  /// Throws SemanticError when the ring or W is missing.
  LGPair pair() const;
};

bool operator==(const ProblemSpec& a, const ProblemSpec& b);

/// Throws SyntaxError with the position and the expected token, and
/// SemanticError for unknown variables, shape mismatches, factorizations that
/// do not square to W, duplicate names and inconsistent complexes.
ProblemSpec parse_problem(std::string_view text);

/// Canonical text; parse_problem(to_text(p)) == p.
std::string to_text(const ProblemSpec& p);

}  // namespace lgtrace
