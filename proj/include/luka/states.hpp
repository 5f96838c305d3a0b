#pragma once

// States of the free MV-algebra given by weights on the vertices of a regular
// complex, the exact Lebesgue state, and step-by-step faithful extension of a
// strictly coherent book.

#include "luka/coherence.hpp"
#include "luka/complex.hpp"
#include "luka/formula.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace luka {

/// s(f) = sum_v f(v) lambda_v.
class DiscreteState {
 public:
  /// Throws Error unless the weights are nonnegative, sum to one and match
  /// the vertex count.
  DiscreteState(std::shared_ptr<const RegularComplex> complex, VectorQ weights);

  const RegularComplex& complex() const { return *complex_; }
  const std::shared_ptr<const RegularComplex>& complex_ptr() const { return complex_; }
  const VectorQ& weights() const { return weights_; }
  int dimension() const { return complex_->dimension(); }
  /// Positive weight at every vertex.
  bool faithful() const;

 private:
  std::shared_ptr<const RegularComplex> complex_;
  VectorQ weights_;
};

/// Throws DimensionError when f has more variables than the complex.
Rational state_eval(const DiscreteState& s, const Formula& f);

/// Integral of f over [0,1]^n; n defaults to the arity of f (at least one).
Rational lebesgue_state(const Formula& f, int n = 0);

/// Values of f at the vertices of c, in vertex order.
std::vector<Rational> restrict(const Formula& f, const RegularComplex& c);

/// Raised by ExtensionSession::open on a book that is not strictly coherent.
class NotStrictlyCoherent : public Error {
 public:
  explicit NotStrictlyCoherent(Verdict v);
  const Verdict& verdict() const { return verdict_; }

 private:
  Verdict verdict_;
};

class ExtensionSession {
 public:
  using Entry = std::pair<Formula, Rational>;

  /// Δ0 linearizes the book; the state is the max-t solution.  n defaults to
  /// the book's arity.
  static ExtensionSession open(const Book& book, int n = 0);

  /// Opens and extends by every formula in turn.
  static ExtensionSession replay(const Book& book, int n, const std::vector<Formula>& formulas);

  /// Refines the complex to linearize g, re-solves with all earlier values
  /// fixed, records and returns s(g).
  Rational extend(const Formula& g);

  const Book& book() const { return book_; }
  const std::vector<Entry>& history() const { return history_; }
  const DiscreteState& state() const { return state_; }
  const RegularComplex& complex() const { return state_.complex(); }
  int dimension() const { return state_.dimension(); }
  Rational eval(const Formula& f) const { return state_eval(state_, f); }

 private:
  ExtensionSession(Book book, DiscreteState state) : book_(std::move(book)), state_(std::move(state)) {}

  Book book_;
  std::vector<Entry> history_;
  DiscreteState state_;
};

}  // namespace luka
