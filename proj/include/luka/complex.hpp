#pragma once

// Regular (unimodular) triangulations of [0,1]^n, linearizing complexes of
// formula sets, Schauder hats and piecewise-linear functions over them.
//
// An integer affine form on R^n is stored as a VectorZ of length n+1 with
// the constant term last: a . (x, 1).  Evaluated on a homogeneous
// correspondent it gives den(x) times the value at x.

#include "luka/formula.hpp"
#include "luka/rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace luka {

using AffineForm = VectorZ;

/// Size limits for the exponential constructions.
struct Limits {
  int max_dimension = 4;
  std::size_t max_formulas = 8;
  std::size_t max_subdivisions = 100000;
};

/// Current limits; LUKA_MAX_DIM in the environment overrides max_dimension.
Limits limits();

class RegularComplex {
 public:
  RegularComplex() = default;
  /// Sorts vertices lexicographically and simplexes by their sorted index
  /// lists.  Throws Error on malformed data (wrong simplex size, bad index,
  /// degenerate simplex).  Regularity is checked by validate().
  RegularComplex(int n, std::vector<VectorQ> vertices, std::vector<std::vector<std::size_t>> simplexes);

  int dimension() const { return n_; }
  const std::vector<VectorQ>& vertices() const { return vertices_; }
  const VectorQ& vertex(std::size_t i) const { return vertices_[i]; }
  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<std::vector<std::size_t>>& simplexes() const { return simplexes_; }
  const std::vector<std::size_t>& simplex(std::size_t t) const { return simplexes_[t]; }
  std::size_t simplex_count() const { return simplexes_.size(); }

  std::optional<std::size_t> find_vertex(const VectorQ& x) const;
  /// Barycentric coordinates of x with respect to simplex t (same order as
  /// simplex(t)).
  VectorQ barycentric(std::size_t t, const VectorQ& x) const;
  /// Row i: coefficients (a, c) of the i-th barycentric coordinate a.x + c.
  const MatrixQ& barycentric_map(std::size_t t) const { return maps_[t]; }
  /// Some simplex containing x; throws DimensionError/Error if x is outside.
  std::size_t locate(const VectorQ& x) const;

  friend bool operator==(const RegularComplex& a, const RegularComplex& b) {
    return a.n_ == b.n_ && a.vertices_ == b.vertices_ && a.simplexes_ == b.simplexes_;
  }

 private:
  int n_ = 0;
  std::vector<VectorQ> vertices_;
  std::vector<std::vector<std::size_t>> simplexes_;
  std::vector<MatrixQ> maps_;
};

struct ComplexReport {
  bool regular = true;
  bool covers = true;     // volumes sum to one
  bool manifold = true;   // every interior facet is shared by exactly two simplexes
  Rational volume;
  std::string message;
  bool ok() const { return regular && covers && manifold; }
};

ComplexReport validate(const RegularComplex& c);

/// The n! permutation simplexes of [0,1]^n.
RegularComplex kuhn_base(int n);

/// Regular complex on which every formula is affine on every simplex.  The
/// dimension is the largest arity (at least one) unless given explicitly.
RegularComplex linearize(const std::vector<Formula>& phi, int n = 0);

/// Subdivides c until every extra formula is affine on each simplex.
RegularComplex refine(const RegularComplex& c, const std::vector<Formula>& extra);

/// Subdivides c by Farey blow-ups until no simplex crosses any of the
/// hyperplanes a.(x,1) = 0.
RegularComplex split_by_hyperplanes(const RegularComplex& c, const std::vector<AffineForm>& planes);

/// Regular refinement of c having the rational point p among its vertices,
/// by stellar subdivisions at Farey mediants of the face carrying p.
RegularComplex blow_up(const RegularComplex& c, const VectorQ& p);

/// Integer hyperplanes (primitive, first nonzero entry positive, sorted)
/// across which the function of f actually bends, over [0,1]^n.
std::vector<AffineForm> essential_hyperplanes(const Formula& f, int n);

/// Exact test that f agrees with its vertex interpolant on every simplex.
bool check_linear(const Formula& f, const RegularComplex& c);

/// F(v) rows for every vertex, one column per formula.  Throws Error when c
/// does not linearize some formula.
MatrixQ vertex_profile(const std::vector<Formula>& phi, const RegularComplex& c);

/// Affine function a.x + c.
struct AffinePiece {
  VectorQ coefficients;
  Rational constant;
  Rational operator()(const VectorQ& x) const { return coefficients.dot(x) + constant; }
  bool is_integral() const;
  friend bool operator==(const AffinePiece& a, const AffinePiece& b) {
    return a.constant == b.constant && a.coefficients == b.coefficients;
  }
};

/// Continuous function determined by its values at the vertices of a complex.
class PLFunction {
 public:
  PLFunction(std::shared_ptr<const RegularComplex> complex, std::vector<Rational> values);

  const RegularComplex& complex() const { return *complex_; }
  const std::shared_ptr<const RegularComplex>& complex_ptr() const { return complex_; }
  const std::vector<Rational>& values() const { return values_; }
  Rational operator()(const VectorQ& x) const;
  AffinePiece piece(std::size_t t) const;

 private:
  std::shared_ptr<const RegularComplex> complex_;
  std::vector<Rational> values_;
};

/// Restriction of f to the vertices of c, as a PL function.
PLFunction interpolant(const Formula& f, std::shared_ptr<const RegularComplex> c);

struct SchauderHat {
  std::size_t apex;
  /// One piece per simplex of the complex; zero on simplexes missing the apex.
  std::vector<AffinePiece> pieces;
  /// Evaluates through the containing simplex.
  Rational operator()(const RegularComplex& c, const VectorQ& x) const;
};

/// One hat per vertex.  Throws Error if a piece fails to be integral.
std::vector<SchauderHat> hats(const RegularComplex& c);

}  // namespace luka
