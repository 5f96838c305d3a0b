#pragma once

// Onesets of formulas, formulas with prescribed onesets, semantic validity
// and deduction exponents, and the provability form of (strict) coherence.
//
// Provability is decided through validity: a formula is provable iff its
// function is identically 1 on the cube.

#include "luka/coherence.hpp"
#include "luka/complex.hpp"
#include "luka/formula.hpp"
#include "luka/geometry.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace luka {

/// Finite union of rational polytopes.
struct Polyhedron {
  std::vector<Polytope> pieces;
  bool empty() const { return pieces.empty(); }
  bool contains(const VectorQ& x) const;
};

/// {x in [0,1]^n : f(x) = 1} as a union of faces of a triangulation on which
/// f is affine.  n defaults to the arity of f (at least one).
Polyhedron mod_of(const Formula& f, int n = 0);

/// Exact test that the oneset of f in [0,1]^n is the union of `target`.
bool oneset_equals(const Formula& f, const std::vector<Polytope>& target, int n = 0);

/// Formula whose function is min(1, max(0, l(x))) for l = a.(x, 1), n =
/// a.size() - 1.  Throws Error if the exact verification fails.
Formula synth_affine_term(const AffineForm& l);

/// Exact comparison of t with min(1, max(0, l)) over the cube.
bool verify_affine_term(const Formula& t, const AffineForm& l);

/// Max-min formulas of the Schauder hats of c at the given vertices,
/// verified exactly against the hats.
std::vector<Formula> synth_hat_formulas(const RegularComplex& c, const std::vector<std::size_t>& apexes);

/// Regular complex of the cube in which p is a union of simplexes.
RegularComplex supporting_complex(const Polytope& p);

/// Formula whose oneset is p: the strong disjunction of the hats of
/// supporting_complex(p) at the vertices lying in p.
Formula synth_polytope_formula(const Polytope& p);

/// Strong disjunction of the hats of c at the given vertices.  Its oneset is
/// the union of the faces of c spanned by those vertices.
Formula synth_faces_formula(const RegularComplex& c, const std::vector<std::size_t>& vertices);

/// Join of the polytope formulas of the facets of d, all built on
/// supporting_complex(d); the constant 0 when d is a single point.
Formula synth_boundary_formula(const Polytope& d);
Formula synth_boundary_formula(const std::vector<Formula>& phi);

/// f is identically 1 on [0,1]^n.
bool is_valid(const Formula& f, int n = 0);

/// Least n >= 1 with phi^n -> psi valid, or nothing when none exists.
std::optional<int> deduction_exponent(const Formula& phi, const Formula& psi, int n = 0);

/// The formulas attached to a list of events: the risk polytope D, its
/// formula and the formula of its relative boundary.  Building it is the
/// expensive step; checks of individual books reuse it.
class CoherenceTheory {
 public:
  explicit CoherenceTheory(std::vector<Formula> phi);

  const std::vector<Formula>& events() const { return phi_; }
  int dimension() const { return static_cast<int>(phi_.size()); }
  const RiskPolytope& risk() const { return risk_; }
  const Formula& polytope_formula() const { return pi_phi_; }
  const Formula& boundary_formula() const { return pi_rb_; }
  /// Complex supporting D and all of its facets.
  const RegularComplex& complex() const;

  struct Data;
  const Data& data() const { return *data_; }

 private:
  std::vector<Formula> phi_;
  RiskPolytope risk_;
  Formula pi_phi_;
  Formula pi_rb_;
  std::shared_ptr<const Data> data_;
};

struct LogicVerdict {
  bool coherent = false;
  bool strict = false;
  /// Least n with (pi_beta)^n -> polytope formula valid.
  std::optional<int> exponent_polytope;
  /// Least n with (pi_beta)^n -> boundary formula valid.
  std::optional<int> exponent_boundary;
  Formula pi_beta = Formula::zero();
};

LogicVerdict logic_coherence_check(const CoherenceTheory& theory, const VectorQ& beta);
LogicVerdict logic_coherence_check(const Book& book);

}  // namespace luka
