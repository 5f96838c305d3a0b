#include "luka/rational.hpp"

#include "luka/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace luka {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw Error("malformed rational '" + std::string(text) + "'");
  }
  const Integer d{std::string(den)};
  if (d == 0) throw Error("zero denominator in rational '" + std::string(text) + "'");
  const Integer n{std::string(num)};
  Rational q(n, d);
  return negative ? Rational(-q) : q;
}

Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return Integer(0);
  return boost::multiprecision::lcm(a, b);
}

Integer common_denominator(const VectorQ& x) {
  Integer den(1);
  for (Eigen::Index i = 0; i < x.size(); ++i) den = lcm(den, denominator_of(x(i)));
  return den;
}

VectorQ make_vector(std::initializer_list<Rational> values) {
  VectorQ v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& q : values) v(i++) = q;
  return v;
}

VectorQ make_vector(const std::vector<Rational>& values) {
  VectorQ v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

bool LexLess::operator()(const VectorQ& a, const VectorQ& b) const {
  const Eigen::Index n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i) < b(i)) return true;
    if (b(i) < a(i)) return false;
  }
  return a.size() < b.size();
}

bool in_unit_cube(const VectorQ& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < 0 || x(i) > 1) return false;
  }
  return true;
}

std::string point_to_string(const VectorQ& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(x(i));
  }
  return out + ")";
}

namespace linalg {

Integer determinant(MatrixZ m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return Integer(1);
  Integer sign(1);
  Integer prev(1);
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index sel = -1;
      for (Eigen::Index r = k + 1; r < n; ++r) {
        if (m(r, k) != 0) {
          sel = r;
          break;
        }
      }
      if (sel < 0) return Integer(0);
      m.row(sel).swap(m.row(k));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Integer gcd_of_maximal_minors(const MatrixZ& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (rows > cols) return Integer(0);
  std::vector<bool> pick(static_cast<std::size_t>(cols), false);
  std::fill(pick.begin(), pick.begin() + rows, true);
  Integer g(0);
  do {
    MatrixZ minor(rows, rows);
    Eigen::Index out = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (pick[static_cast<std::size_t>(c)]) minor.col(out++) = m.col(c);
    }
    g = gcd(g, determinant(minor));
    if (g == 1) return g;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return boost::multiprecision::abs(g);
}

VectorZ primitive_integer(const VectorQ& v) {
  Integer den(1);
  for (Eigen::Index i = 0; i < v.size(); ++i) den = lcm(den, denominator_of(v(i)));
  VectorZ z(v.size());
  Integer g(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    z(i) = numerator_of(v(i)) * (den / denominator_of(v(i)));
    g = gcd(g, z(i));
  }
  if (g > 1) {
    for (Eigen::Index i = 0; i < v.size(); ++i) z(i) /= g;
  }
  return z;
}

std::vector<Eigen::Index> independent_rows(const MatrixQ& m) {
  std::vector<Eigen::Index> chosen;
  MatrixQ basis(0, m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    MatrixQ trial(basis.rows() + 1, m.cols());
    trial.topRows(basis.rows()) = basis;
    trial.row(basis.rows()) = m.row(r);
    if (rank(trial) == trial.rows()) {
      basis = trial;
      chosen.push_back(r);
    }
  }
  return chosen;
}

}  // namespace linalg

}  // namespace luka
