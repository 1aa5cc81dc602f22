#pragma once

// Random and hand-built inputs shared by the unit tests and the acceptance
// runner. Everything is seeded; no test depends on wall-clock randomness.

#include "lgtrace/exact.hpp"
#include "lgtrace/homology.hpp"

#include <random>

namespace fixtures {

using lgtrace::Bidegree;
using lgtrace::DoubleComplex;
using lgtrace::FiniteComplex;
using lgtrace::Index;
using lgtrace::MatrixQ;
using lgtrace::Rational;

inline MatrixQ random_matrix(std::mt19937& rng, Index rows, Index cols, int range = 3) {
  std::uniform_int_distribution<int> d(-range, range);
  MatrixQ m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

inline MatrixQ random_invertible(std::mt19937& rng, Index n) {
  while (true) {
    MatrixQ m = random_matrix(rng, n, n, 2);
    if (lgtrace::determinant(m) != 0) return m;
  }
}

inline MatrixQ inverse(const MatrixQ& m) {
  return lgtrace::rref<Rational>(m, true).transform;
}

inline MatrixQ kron(const MatrixQ& a, const MatrixQ& b) {
  MatrixQ out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Random bounded complex with the given node dimensions: each differential
/// is a random map that factors through the cokernel of the previous one.
inline FiniteComplex random_complex(std::mt19937& rng, int lo, const std::vector<Index>& dims) {
  std::vector<MatrixQ> maps;
  for (size_t k = 0; k + 1 < dims.size(); ++k) {
    MatrixQ d;
    if (k == 0) {
      d = random_matrix(rng, dims[1], dims[0]);
    } else {
      const MatrixQ& prev = maps.back();
      // Rows annihilating the image of the previous differential.
      const MatrixQ left = lgtrace::kernel<Rational>(prev.transpose()).transpose();
      std::uniform_int_distribution<Index> cut(0, left.rows());
      MatrixQ keep = left.topRows(cut(rng));
      d = random_matrix(rng, dims[k + 1], keep.rows()) * keep;
      if (keep.rows() == 0) d = MatrixQ::Zero(dims[k + 1], dims[k]);
    }
    maps.push_back(d);
  }
  return FiniteComplex(lo, dims, maps);
}

/// Adds a direct summand to a double complex: a small complex given by its
/// nodes (one-dimensional each) and identity arrows between them.
struct Piece {
  std::vector<Bidegree> nodes;
  std::vector<std::pair<size_t, size_t>> arrows;  // source node -> target node
};

inline Piece dot(int p, int q) { return {{{p, q}}, {}}; }
inline Piece hpair(int p, int q) { return {{{p, q}, {p + 1, q}}, {{0, 1}}}; }
inline Piece vpair(int p, int q) { return {{{p, q}, {p, q + 1}}, {{0, 1}}}; }
inline Piece square(int p, int q) {
  return {{{p, q}, {p + 1, q}, {p, q + 1}, {p + 1, q + 1}}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}};
}
/// Zig-zag x -> y <- z -> w <- ... starting at (p, q) and going down-right.
/// A staircase with 2s nodes produces a nonzero d_s.
inline Piece staircase(int p, int q, int nodes) {
  Piece s;
  for (int k = 0; k < nodes; ++k) {
    const int step = (k + 1) / 2;
    s.nodes.push_back({p + step, q - k / 2});
  }
  for (int k = 0; k + 1 < nodes; ++k) {
    if (k % 2 == 0) s.arrows.push_back({static_cast<size_t>(k), static_cast<size_t>(k + 1)});
    else s.arrows.push_back({static_cast<size_t>(k + 1), static_cast<size_t>(k)});
  }
  return s;
}

/// Assembles pieces into a double complex. Positions get stacked
/// coordinates in the order pieces are added.
inline DoubleComplex assemble(const std::vector<Piece>& pieces) {
  DoubleComplex k;
  std::vector<std::vector<Index>> coord(pieces.size());
  for (size_t i = 0; i < pieces.size(); ++i)
    for (const auto& n : pieces[i].nodes) coord[i].push_back(k.dims[n]++);
  for (const auto& [pq, d] : k.dims) {
    (void)d;
    k.vertical[pq] = k.vertical_map(pq.first, pq.second);
    k.horizontal[pq] = k.horizontal_map(pq.first, pq.second);
  }
  for (size_t i = 0; i < pieces.size(); ++i)
    for (const auto& [s, t] : pieces[i].arrows) {
      const Bidegree a = pieces[i].nodes[s], b = pieces[i].nodes[t];
      auto& m = (b.first == a.first) ? k.vertical[a] : k.horizontal[a];
      m(coord[i][t], coord[i][s]) = 1;
    }
  return k;
}

/// Conjugates every node by a random invertible matrix.
inline DoubleComplex scramble(std::mt19937& rng, const DoubleComplex& k) {
  std::map<Bidegree, MatrixQ> g, ginv;
  for (const auto& [pq, d] : k.dims) {
    g[pq] = random_invertible(rng, d);
    ginv[pq] = inverse(g[pq]);
  }
  auto get = [&](std::map<Bidegree, MatrixQ>& m, Bidegree b) -> MatrixQ {
    auto it = m.find(b);
    return it == m.end() ? MatrixQ::Zero(0, 0) : it->second;
  };
  DoubleComplex out = k;
  for (auto& [pq, m] : out.vertical) {
    const Bidegree up{pq.first, pq.second + 1};
    if (m.size() == 0) continue;
    m = get(g, up) * m * ginv[pq];
  }
  for (auto& [pq, m] : out.horizontal) {
    const Bidegree right{pq.first + 1, pq.second};
    if (m.size() == 0) continue;
    m = get(g, right) * m * ginv[pq];
  }
  return out;
}

/// Random first-quadrant double complex inside [0,w) x [0,h) with node
/// dimensions at most max_dim, built from dots, pairs, squares and
/// staircases and then scrambled by a random change of basis per node.
inline DoubleComplex random_double_complex(std::mt19937& rng, int w, int h, Index max_dim) {
  std::vector<Piece> pieces;
  std::map<Bidegree, Index> load;
  std::uniform_int_distribution<int> kind(0, 5), pp(0, w - 1), qq(0, h - 1), len(3, 6);
  for (int attempt = 0; attempt < 40; ++attempt) {
    const int p = pp(rng), q = qq(rng);
    Piece piece;
    switch (kind(rng)) {
      case 0: piece = dot(p, q); break;
      case 1: piece = hpair(p, q); break;
      case 2: piece = vpair(p, q); break;
      case 3: piece = square(p, q); break;
      default: piece = staircase(p, q, len(rng)); break;
    }
    bool fits = true;
    for (const auto& [a, b] : piece.nodes)
      if (a < 0 || a >= w || b < 0 || b >= h || load[{a, b}] >= max_dim) fits = false;
    if (!fits) continue;
    for (const auto& n : piece.nodes) ++load[n];
    pieces.push_back(piece);
  }
  return scramble(rng, assemble(pieces));
}

}  // namespace fixtures
