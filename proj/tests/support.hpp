#pragma once

#include "luka/formula.hpp"
#include "luka/rational.hpp"

#include <random>
#include <string>
#include <vector>

namespace luka::test {

inline Rational q(const char* s) { return parse_rational(s); }

inline VectorQ pt(std::initializer_list<const char*> coords) {
  std::vector<Rational> v;
  for (const char* c : coords) v.push_back(parse_rational(c));
  return make_vector(v);
}

inline Formula f(const char* text) { return parse(text); }

/// Deterministic generator of small random test data.
class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// p/q in [0,1] with q <= max_den.
  Rational unit(int max_den = 12) {
    const int den = uniform(1, max_den);
    return Rational(uniform(0, den), den);
  }

  VectorQ point(int n, int max_den = 12) {
    VectorQ x(n);
    for (int i = 0; i < n; ++i) x(i) = unit(max_den);
    return x;
  }

  /// Random formula over x1..xn with at most `depth` nested connectives.
  Formula formula(int n, int depth) {
    if (depth == 0 || uniform(0, 4) == 0) {
      const int r = uniform(0, 9);
      if (r == 0) return Formula::zero();
      if (r == 1) return Formula::one();
      return Formula::var(uniform(1, n));
    }
    switch (uniform(0, 5)) {
      case 0: return Formula::neg(formula(n, depth - 1));
      case 1: return Formula::oplus(formula(n, depth - 1), formula(n, depth - 1));
      case 2: return Formula::odot(formula(n, depth - 1), formula(n, depth - 1));
      case 3: return Formula::implies(formula(n, depth - 1), formula(n, depth - 1));
      case 4: return Formula::meet(formula(n, depth - 1), formula(n, depth - 1));
      default: return Formula::join(formula(n, depth - 1), formula(n, depth - 1));
    }
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace luka::test
