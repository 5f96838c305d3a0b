#pragma once

// Exact scalar types and the dense Eigen containers used throughout the
// library.  Everything is templated on the scalar at the container level;
// the library itself only instantiates the exact types below.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace luka {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorQ = Vector<Rational>;
using MatrixQ = Matrix<Rational>;
using VectorZ = Vector<Integer>;
using MatrixZ = Matrix<Integer>;

/// A point of some cube [0,1]^n (or of R^k for risk polytopes).
using Point = VectorQ;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.str(); }
inline std::string to_string(const Integer& z) { return z.str(); }

/// Parses "p/q", "p", or "-p/q".  Throws Error on malformed input.
Rational parse_rational(std::string_view text);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// Least common multiple of the coordinate denominators.
Integer common_denominator(const VectorQ& x);

/// Builds a vector from an initializer list of rationals.
VectorQ make_vector(std::initializer_list<Rational> values);
VectorQ make_vector(const std::vector<Rational>& values);

/// Lexicographic order on equally sized vectors.
struct LexLess {
  bool operator()(const VectorQ& a, const VectorQ& b) const;
};

bool in_unit_cube(const VectorQ& x);

std::string point_to_string(const VectorQ& x);

}  // namespace luka
