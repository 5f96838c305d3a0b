#pragma once

// Exact two-phase primal simplex with Bland's rule.  Every outcome carries a
// certificate that the verify_* functions re-check from the raw data.
//
// Sign conventions for the certificate vector y (one entry per row):
//   infeasible:  y'A >= 0 on nonnegative columns, y'A = 0 on free columns,
//                y'b < 0, y >= 0 on <= rows, y <= 0 on >= rows.
//   optimal:     the dual solution; minimize gives c - y'A >= 0 on
//                nonnegative columns, maximize gives c - y'A <= 0, equality
//                on free columns, and b'y equals the optimum.

#include "luka/rational.hpp"

#include <variant>
#include <vector>

namespace luka {

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class Goal { Minimize, Maximize };

struct LinearProgram {
  Goal goal = Goal::Minimize;
  VectorQ objective;
  MatrixQ matrix;
  std::vector<Sense> senses;
  VectorQ rhs;
  /// Per-variable: true for a free variable, false (default) for x >= 0.
  std::vector<bool> free;

  Eigen::Index variables() const { return matrix.cols(); }
  Eigen::Index rows() const { return matrix.rows(); }
  bool is_free(Eigen::Index j) const;
};

struct LpOptimal {
  Rational value;
  VectorQ primal;
  VectorQ dual;
};

struct LpInfeasible {
  VectorQ farkas;
};

struct LpUnbounded {
  VectorQ point;
  VectorQ ray;
};

using LpOutcome = std::variant<LpOptimal, LpInfeasible, LpUnbounded>;

/// Throws DimensionError on inconsistent shapes.
LpOutcome lp_solve(const LinearProgram& lp);

bool verify_feasible(const LinearProgram& lp, const VectorQ& x);
bool verify_farkas(const LinearProgram& lp, const VectorQ& y);
bool verify_optimal(const LinearProgram& lp, const LpOptimal& opt);
bool verify_unbounded(const LinearProgram& lp, const LpUnbounded& u);

}  // namespace luka
