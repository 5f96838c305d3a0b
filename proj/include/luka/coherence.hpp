#pragma once

// Books of betting odds on formulas, the risk polytope D of a formula list,
// and exact (strict) coherence decisions with checkable certificates.
//
// Balance of stakes s at a valuation x:  sum_i s_i (b_i - f_i(x)).
// A book is incoherent iff some s makes every balance negative.

#include "luka/complex.hpp"
#include "luka/formula.hpp"
#include "luka/geometry.hpp"

#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace luka {

struct BookEntry {
  Formula formula;
  Rational value;
};

class Book {
 public:
  Book() = default;
  /// Throws Error unless every value lies in [0,1].
  explicit Book(std::vector<BookEntry> entries);

  const std::vector<BookEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::vector<Formula> formulas() const;
  VectorQ values() const;
  /// Largest arity among the formulas, at least one.
  int arity() const;

 private:
  std::vector<BookEntry> entries_;
};

/// One `<formula> ; <rational>` entry per line, `#` comments and blank lines
/// ignored.  Errors name the offending line.
Book parse_book(std::string_view text);

struct RiskPolytope {
  Polytope polytope;
  /// F(v) for every vertex of the complex; generator i comes from vertex i.
  MatrixQ profile;
};

RiskPolytope risk_polytope(const std::vector<Formula>& phi, const RegularComplex& c);
RiskPolytope risk_polytope_of_profile(const MatrixQ& profile);

struct Incoherent {
  VectorQ stakes;
};
/// Coherence witness from decide_coherent, which does not test strictness.
struct Coherent {
  VectorQ weights;
};
struct CoherentNotStrict {
  VectorQ weights;
  VectorQ stakes;
};
struct StrictlyCoherent {
  VectorQ weights;
};

/// Weights are indexed like the vertices of the complex used.
using Verdict = std::variant<Incoherent, Coherent, CoherentNotStrict, StrictlyCoherent>;

bool is_coherent(const Verdict& v);
bool is_strict(const Verdict& v);
const char* verdict_name(const Verdict& v);

/// Decisions over a given profile (one row per vertex, one column per book
/// entry).  Stakes are scaled to primitive integer vectors.
Verdict decide_coherent_on_profile(const MatrixQ& profile, const VectorQ& beta);
/// Max-t LP: maximize t with lambda_v >= t, sum lambda = 1, lambda F = beta.
Verdict decide_strict_on_profile(const MatrixQ& profile, const VectorQ& beta);
/// Optimal weights of the max-t program and the optimal t; nullopt when
/// beta is not a convex combination of the profile rows.
std::optional<std::pair<VectorQ, Rational>> max_t_weights(const MatrixQ& profile, const VectorQ& beta);

/// Every balance sum_i s_i (b_i - F(v)_i), one per profile row.
VectorQ balances(const MatrixQ& profile, const VectorQ& beta, const VectorQ& stakes);

bool verify_certificate_on_profile(const Verdict& v, const MatrixQ& profile, const VectorQ& beta);

Verdict decide_coherent(const Book& book);
Verdict decide_coherent(const Book& book, const RegularComplex& c);
Verdict decide_strict(const Book& book);
Verdict decide_strict(const Book& book, const RegularComplex& c);

/// Re-derives the profile from scratch (checking that c linearizes the book)
/// and re-checks every inequality of the verdict.
bool verify_certificate(const Verdict& v, const Book& book, const RegularComplex& c);

/// Geometry-only strictness oracle: beta in the relative interior of D.
bool ri_membership_crosscheck(const VectorQ& beta, const RiskPolytope& d);

}  // namespace luka
