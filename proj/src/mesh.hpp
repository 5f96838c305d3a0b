#pragma once

// Mutable triangulation used while subdividing.  Cells are maximal
// simplexes given by vertex ids; `star` lists the cells around each vertex.

#include "luka/complex.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace luka::detail {

class Mesh {
 public:
  Mesh(int n, std::vector<VectorQ> points, std::vector<std::vector<int>> cells);
  static Mesh from(const RegularComplex& c);

  int dimension() const { return n_; }
  const std::vector<VectorQ>& points() const { return points_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<int>& cell(std::size_t c) const { return cells_[c]; }
  /// Index of the cell of the starting complex containing cell c.
  int origin(std::size_t c) const { return origin_[c]; }
  const std::vector<int>& star(int v) const { return star_[static_cast<std::size_t>(v)]; }

  int add_point(VectorQ p);
  /// Stellar subdivision of the edge uv at the new vertex w.
  void split_edge(int u, int v, int w);
  /// Stellar subdivision of the face spanned by `face` at the new vertex w.
  void split_face(const std::vector<int>& face, int w);
  bool has_edge(int u, int v) const;
  /// All vertices sharing a cell with v.
  std::vector<int> neighbours(int v) const;
  /// Every edge once, as (smaller, larger).
  std::vector<std::pair<int, int>> edges() const;

  /// Homogeneous correspondent of vertex v, computed on first use.
  const VectorZ& homogeneous(int v);

  RegularComplex to_complex() const;

 private:
  int n_;
  std::vector<VectorQ> points_;
  std::vector<VectorZ> hom_;
  std::vector<std::vector<int>> cells_;
  std::vector<int> origin_;
  std::vector<std::vector<int>> star_;
};

/// Splits by an integer hyperplane with Farey blow-ups; every new vertex is
/// the mediant of a crossing edge.  `budget` counts remaining subdivisions.
void regular_split(Mesh& m, const AffineForm& h, std::size_t& budget);

/// Stellar subdivisions at Farey mediants until the rational point p is a
/// vertex; returns its id.  `budget` counts remaining subdivisions.
int blow_up(Mesh& m, const VectorQ& p, std::size_t& budget);

/// Per-vertex rows of values that are affine on every cell.
using Carried = std::vector<std::vector<Rational>>;

/// Splits every edge whose endpoint values have opposite signs at the zero
/// of the interpolated value.  `value` holds one entry per current vertex.
/// Rows of `carried`, when given, are interpolated onto the new vertices.
/// Returns the new vertices.
std::vector<int> exact_split(Mesh& m, const std::vector<Rational>& value, Carried* carried = nullptr);

/// Splits m until every slot of prog is affine on every cell, carrying
/// `carried` along.  Returns all slot values per vertex.
Carried decompose(Mesh& m, const FormulaProgram& prog, Carried* carried = nullptr);

/// A triangulation of the cube with the values of some functions that are
/// affine on each of its cells, one row per vertex.
struct PLView {
  Mesh mesh;
  Carried values;
};

/// Affine function through the values at the vertices of a cell.
AffinePiece fit_piece(const std::vector<const VectorQ*>& pts, const std::vector<Rational>& values);

}  // namespace luka::detail
