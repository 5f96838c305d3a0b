#include "luka/lp.hpp"

#include <optional>

namespace luka {

bool LinearProgram::is_free(Eigen::Index j) const {
  return static_cast<std::size_t>(j) < free.size() && free[static_cast<std::size_t>(j)];
}

namespace {

void check_shapes(const LinearProgram& lp) {
  const Eigen::Index m = lp.matrix.rows();
  const Eigen::Index n = lp.matrix.cols();
  if (lp.objective.size() != n) throw DimensionError("lp: objective length differs from column count");
  if (lp.rhs.size() != m) throw DimensionError("lp: rhs length differs from row count");
  if (static_cast<Eigen::Index>(lp.senses.size()) != m) throw DimensionError("lp: one sense per row required");
  if (!lp.free.empty() && static_cast<Eigen::Index>(lp.free.size()) != n) {
    throw DimensionError("lp: free flags must match the column count");
  }
}

enum class ColumnKind { Plus, Minus, Slack, Artificial };

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : lp_(lp) {
    const Eigen::Index m = lp.rows();
    const Eigen::Index n = lp.variables();
    for (Eigen::Index j = 0; j < n; ++j) {
      cols_.push_back({ColumnKind::Plus, j});
      if (lp.is_free(j)) cols_.push_back({ColumnKind::Minus, j});
    }
    flip_.assign(static_cast<std::size_t>(m), 1);
    std::vector<Sense> sense(lp.senses);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (lp.rhs(i) < 0) {
        flip_[static_cast<std::size_t>(i)] = -1;
        auto& s = sense[static_cast<std::size_t>(i)];
        if (s == Sense::LessEqual) s = Sense::GreaterEqual;
        else if (s == Sense::GreaterEqual) s = Sense::LessEqual;
      }
    }
    const std::size_t structural = cols_.size();
    std::vector<Eigen::Index> slack_of(static_cast<std::size_t>(m), -1);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (sense[static_cast<std::size_t>(i)] != Sense::Equal) {
        slack_of[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(cols_.size());
        cols_.push_back({ColumnKind::Slack, i});
      }
    }
    id_col_.assign(static_cast<std::size_t>(m), -1);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (sense[static_cast<std::size_t>(i)] == Sense::LessEqual) {
        id_col_[static_cast<std::size_t>(i)] = slack_of[static_cast<std::size_t>(i)];
      } else {
        id_col_[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(cols_.size());
        cols_.push_back({ColumnKind::Artificial, i});
      }
    }
    const Eigen::Index total = static_cast<Eigen::Index>(cols_.size());
    rhs_col_ = total;
    t_ = MatrixQ::Zero(m, total + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Rational f(flip_[static_cast<std::size_t>(i)]);
      for (std::size_t c = 0; c < structural; ++c) {
        const auto& col = cols_[c];
        const Rational& a = lp.matrix(i, col.source);
        if (a == 0) continue;
        t_(i, static_cast<Eigen::Index>(c)) = col.kind == ColumnKind::Plus ? Rational(f * a) : Rational(-f * a);
      }
      const auto s = slack_of[static_cast<std::size_t>(i)];
      if (s >= 0) t_(i, s) = sense[static_cast<std::size_t>(i)] == Sense::LessEqual ? 1 : -1;
      t_(i, id_col_[static_cast<std::size_t>(i)]) = 1;
      t_(i, rhs_col_) = f * lp.rhs(i);
    }
    basis_ = id_col_;
  }

  LpOutcome solve() {
    const Eigen::Index m = t_.rows();
    // Phase 1.
    VectorQ cost = VectorQ::Zero(rhs_col_);
    for (Eigen::Index c = 0; c < rhs_col_; ++c) {
      if (cols_[static_cast<std::size_t>(c)].kind == ColumnKind::Artificial) cost(c) = 1;
    }
    price(cost);
    if (run(true).has_value()) throw Error("lp: phase one cannot be unbounded");
    if (reduced_(rhs_col_) != 0) {
      VectorQ y(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto id = id_col_[static_cast<std::size_t>(i)];
        const Rational pi = cost(id) - reduced_(id);
        y(i) = -pi * flip_[static_cast<std::size_t>(i)];
      }
      return LpInfeasible{y};
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])].kind != ColumnKind::Artificial) continue;
      for (Eigen::Index c = 0; c < rhs_col_; ++c) {
        if (cols_[static_cast<std::size_t>(c)].kind == ColumnKind::Artificial) continue;
        if (t_(i, c) != 0) {
          pivot(i, c);
          break;
        }
      }
    }
    // Phase 2.
    const bool maximize = lp_.goal == Goal::Maximize;
    cost = VectorQ::Zero(rhs_col_);
    for (Eigen::Index c = 0; c < rhs_col_; ++c) {
      const auto& col = cols_[static_cast<std::size_t>(c)];
      if (col.kind == ColumnKind::Plus) cost(c) = lp_.objective(col.source);
      if (col.kind == ColumnKind::Minus) cost(c) = -lp_.objective(col.source);
      if (maximize) cost(c) = -cost(c);
    }
    price(cost);
    if (auto entering = run(false)) {
      LpUnbounded u;
      u.point = current_point();
      VectorQ d = VectorQ::Zero(rhs_col_);
      d(*entering) = 1;
      for (Eigen::Index i = 0; i < m; ++i) d(basis_[static_cast<std::size_t>(i)]) = -t_(i, *entering);
      u.ray = to_original(d);
      return u;
    }
    LpOptimal opt;
    opt.primal = current_point();
    opt.value = lp_.objective.dot(opt.primal);
    opt.dual = VectorQ(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Rational pi = -reduced_(id_col_[static_cast<std::size_t>(i)]);
      opt.dual(i) = maximize ? Rational(-pi * flip_[static_cast<std::size_t>(i)]) : Rational(pi * flip_[static_cast<std::size_t>(i)]);
    }
    return opt;
  }

 private:
  struct Column {
    ColumnKind kind;
    Eigen::Index source;
  };

  void price(const VectorQ& cost) {
    reduced_ = VectorQ::Zero(rhs_col_ + 1);
    reduced_.head(rhs_col_) = cost;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      const Rational& cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb == 0) continue;
      reduced_ -= cb * t_.row(i).transpose();
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    const Rational inv = Rational(1) / t_(row, col);
    t_.row(row) *= inv;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row || t_(i, col) == 0) continue;
      const Rational f = t_(i, col);
      t_.row(i) -= f * t_.row(row);
    }
    if (reduced_(col) != 0) {
      const Rational f = reduced_(col);
      reduced_ -= f * t_.row(row).transpose();
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Bland's rule simplex.  Returns the entering column on unboundedness.
  std::optional<Eigen::Index> run(bool phase_one) {
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index c = 0; c < rhs_col_; ++c) {
        if (!phase_one && cols_[static_cast<std::size_t>(c)].kind == ColumnKind::Artificial) continue;
        if (reduced_(c) < 0) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return std::nullopt;
      Eigen::Index leave = -1;
      Rational best;
      for (Eigen::Index i = 0; i < t_.rows(); ++i) {
        if (t_(i, enter) <= 0) continue;
        const Rational ratio = t_(i, rhs_col_) / t_(i, enter);
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return enter;
      pivot(leave, enter);
    }
  }

  VectorQ to_original(const VectorQ& expanded) const {
    VectorQ x = VectorQ::Zero(lp_.variables());
    for (Eigen::Index c = 0; c < rhs_col_; ++c) {
      const auto& col = cols_[static_cast<std::size_t>(c)];
      if (col.kind == ColumnKind::Plus) x(col.source) += expanded(c);
      if (col.kind == ColumnKind::Minus) x(col.source) -= expanded(c);
    }
    return x;
  }

  VectorQ current_point() const {
    VectorQ e = VectorQ::Zero(rhs_col_);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) e(basis_[static_cast<std::size_t>(i)]) = t_(i, rhs_col_);
    return to_original(e);
  }

  const LinearProgram& lp_;
  std::vector<Column> cols_;
  std::vector<int> flip_;
  std::vector<Eigen::Index> id_col_;
  std::vector<Eigen::Index> basis_;
  Eigen::Index rhs_col_ = 0;
  MatrixQ t_;
  VectorQ reduced_;
};

bool row_ok(Sense s, const Rational& lhs, const Rational& rhs) {
  switch (s) {
    case Sense::LessEqual: return lhs <= rhs;
    case Sense::GreaterEqual: return lhs >= rhs;
    case Sense::Equal: return lhs == rhs;
  }
  return false;
}

}  // namespace

LpOutcome lp_solve(const LinearProgram& lp) {
  check_shapes(lp);
  return Tableau(lp).solve();
}

bool verify_feasible(const LinearProgram& lp, const VectorQ& x) {
  check_shapes(lp);
  if (x.size() != lp.variables()) return false;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!lp.is_free(j) && x(j) < 0) return false;
  }
  const VectorQ ax = lp.matrix * x;
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    if (!row_ok(lp.senses[static_cast<std::size_t>(i)], ax(i), lp.rhs(i))) return false;
  }
  return true;
}

bool verify_farkas(const LinearProgram& lp, const VectorQ& y) {
  check_shapes(lp);
  if (y.size() != lp.rows()) return false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Sense s = lp.senses[static_cast<std::size_t>(i)];
    if (s == Sense::LessEqual && y(i) < 0) return false;
    if (s == Sense::GreaterEqual && y(i) > 0) return false;
  }
  const VectorQ ya = lp.matrix.transpose() * y;
  for (Eigen::Index j = 0; j < ya.size(); ++j) {
    if (lp.is_free(j) ? ya(j) != 0 : ya(j) < 0) return false;
  }
  return y.dot(lp.rhs) < 0;
}

bool verify_optimal(const LinearProgram& lp, const LpOptimal& opt) {
  if (!verify_feasible(lp, opt.primal)) return false;
  if (opt.dual.size() != lp.rows()) return false;
  const bool maximize = lp.goal == Goal::Maximize;
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    const Sense s = lp.senses[static_cast<std::size_t>(i)];
    const Rational& y = opt.dual(i);
    // Minimize: y <= 0 on <= rows, y >= 0 on >= rows; maximize flips both.
    if (s == Sense::LessEqual && (maximize ? y < 0 : y > 0)) return false;
    if (s == Sense::GreaterEqual && (maximize ? y > 0 : y < 0)) return false;
  }
  const VectorQ reduced = lp.objective - lp.matrix.transpose() * opt.dual;
  for (Eigen::Index j = 0; j < reduced.size(); ++j) {
    if (lp.is_free(j)) {
      if (reduced(j) != 0) return false;
    } else if (maximize ? reduced(j) > 0 : reduced(j) < 0) {
      return false;
    }
  }
  const Rational primal = lp.objective.dot(opt.primal);
  return primal == opt.value && lp.rhs.dot(opt.dual) == opt.value;
}

bool verify_unbounded(const LinearProgram& lp, const LpUnbounded& u) {
  if (!verify_feasible(lp, u.point)) return false;
  if (u.ray.size() != lp.variables()) return false;
  for (Eigen::Index j = 0; j < u.ray.size(); ++j) {
    if (!lp.is_free(j) && u.ray(j) < 0) return false;
  }
  const VectorQ ad = lp.matrix * u.ray;
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    if (!row_ok(lp.senses[static_cast<std::size_t>(i)], ad(i), Rational(0))) return false;
  }
  const Rational gain = lp.objective.dot(u.ray);
  return lp.goal == Goal::Maximize ? gain > 0 : gain < 0;
}

}  // namespace luka
