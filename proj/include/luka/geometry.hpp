#pragma once

// Exact rational polyhedral geometry: homogeneous correspondents, regular
// (unimodular) simplexes, convex hulls with relative facets, face lattices.

#include "luka/rational.hpp"

#include <cstddef>
#include <vector>

namespace luka {

/// (den*x_1, ..., den*x_k, den) with den the lcm of the coordinate
/// denominators.
VectorZ homogeneous_correspondent(const VectorQ& x);
VectorQ dehomogenize(const VectorZ& h);

/// co(v_0, ..., v_m) with affinely independent rational vertices.
class Simplex {
 public:
  explicit Simplex(std::vector<VectorQ> vertices);

  const std::vector<VectorQ>& vertices() const { return vertices_; }
  const VectorQ& vertex(std::size_t i) const { return vertices_[i]; }
  /// m, the number of vertices minus one.
  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }
  int ambient_dimension() const { return static_cast<int>(vertices_.front().size()); }

 private:
  std::vector<VectorQ> vertices_;
};

/// True when the homogeneous correspondents of the vertices extend to a
/// basis of the integer lattice (gcd of maximal minors is one).
bool is_regular_simplex(const Simplex& s);
bool is_regular_simplex(const std::vector<VectorQ>& vertices);

/// |det| / m! of a full-dimensional simplex, zero otherwise.
Rational simplex_volume(const Simplex& s);
Rational simplex_volume(const std::vector<VectorQ>& vertices);

/// normal . x <= offset, with normal a primitive integer vector supported on
/// the coordinates parametrizing the affine hull.
struct Facet {
  VectorQ normal;
  Rational offset;
  /// Indices into Polytope::extremals() of the extremal points on the facet.
  std::vector<std::size_t> vertices;
};

class Polytope {
 public:
  const std::vector<VectorQ>& generators() const { return generators_; }
  const std::vector<VectorQ>& extremals() const { return extremals_; }
  /// For each extremal point, the index of its first occurrence among the
  /// generators.
  const std::vector<std::size_t>& extremal_generators() const { return extremal_generators_; }
  const std::vector<Facet>& facets() const { return facets_; }
  int dimension() const { return dimension_; }
  int ambient_dimension() const { return static_cast<int>(base_.size()); }

  /// Affine hull as { x : equations * x = rhs }.
  const MatrixQ& hull_equations() const { return equations_; }
  const VectorQ& hull_rhs() const { return rhs_; }
  const VectorQ& hull_point() const { return base_; }
  /// Coordinates whose projection is injective on the affine hull.
  const std::vector<Eigen::Index>& chart() const { return chart_; }

  bool in_affine_hull(const VectorQ& x) const;
  bool contains(const VectorQ& x) const;
  /// Relative interior membership; a point polytope is its own interior.
  bool in_relative_interior(const VectorQ& x) const;

 private:
  friend Polytope convex_hull(const std::vector<VectorQ>& points);

  std::vector<VectorQ> generators_;
  std::vector<VectorQ> extremals_;
  std::vector<std::size_t> extremal_generators_;
  std::vector<Facet> facets_;
  int dimension_ = 0;
  VectorQ base_;
  MatrixQ equations_;
  VectorQ rhs_;
  std::vector<Eigen::Index> chart_;
};

/// Beneath-beyond hull in the affine hull of the points.  Throws Error on an
/// empty list or mixed dimensions.
Polytope convex_hull(const std::vector<VectorQ>& points);

/// Every nonempty proper face, ordered by decreasing vertex count and then
/// by the sorted extremal index sets.
std::vector<Polytope> faces(const Polytope& p);

/// Extremal index sets of the nonempty proper faces (same order as faces()).
std::vector<std::vector<std::size_t>> face_index_sets(const Polytope& p);

}  // namespace luka
