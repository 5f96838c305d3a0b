#include "luka/coherence.hpp"

#include "luka/linalg.hpp"
#include "luka/lp.hpp"

#include <algorithm>
#include <sstream>

namespace luka {

Book::Book(std::vector<BookEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.value < 0 || e.value > 1) {
      throw Error("book value " + to_string(e.value) + " for " + render(e.formula) + " is outside [0,1]");
    }
  }
}

std::vector<Formula> Book::formulas() const {
  std::vector<Formula> out;
  for (const auto& e : entries_) out.push_back(e.formula);
  return out;
}

VectorQ Book::values() const {
  VectorQ v(static_cast<Eigen::Index>(entries_.size()));
  for (std::size_t i = 0; i < entries_.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries_[i].value;
  return v;
}

int Book::arity() const {
  int n = 1;
  for (const auto& e : entries_) n = std::max(n, e.formula.arity());
  return n;
}

Book parse_book(std::string_view text) {
  std::vector<BookEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto semi = line.rfind(';');
    if (semi == std::string::npos) throw Error("book line " + std::to_string(number) + ": expected '<formula> ; <value>'");
    try {
      Formula f = parse(std::string_view(line).substr(0, semi));
      Rational v = parse_rational(std::string_view(line).substr(semi + 1));
      if (v < 0 || v > 1) throw Error("value outside [0,1]");
      entries.push_back({std::move(f), std::move(v)});
    } catch (const Error& e) {
      throw Error("book line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (entries.empty()) throw Error("book has no entries");
  return Book(std::move(entries));
}

// ---------------------------------------------------------------------------

RiskPolytope risk_polytope_of_profile(const MatrixQ& profile) {
  std::vector<VectorQ> rows;
  for (Eigen::Index r = 0; r < profile.rows(); ++r) rows.push_back(profile.row(r).transpose());
  return RiskPolytope{convex_hull(rows), profile};
}

RiskPolytope risk_polytope(const std::vector<Formula>& phi, const RegularComplex& c) {
  return risk_polytope_of_profile(vertex_profile(phi, c));
}

bool is_coherent(const Verdict& v) { return !std::holds_alternative<Incoherent>(v); }
bool is_strict(const Verdict& v) { return std::holds_alternative<StrictlyCoherent>(v); }

const char* verdict_name(const Verdict& v) {
  switch (v.index()) {
    case 0: return "incoherent";
    case 1: return "coherent";
    case 2: return "coherent";
    default: return "strict";
  }
}

VectorQ balances(const MatrixQ& profile, const VectorQ& beta, const VectorQ& stakes) {
  VectorQ out(profile.rows());
  const Rational base = stakes.dot(beta);
  for (Eigen::Index r = 0; r < profile.rows(); ++r) out(r) = base - stakes.dot(profile.row(r).transpose());
  return out;
}

namespace {

VectorQ primitive_stakes(const VectorQ& s) {
  const VectorZ z = linalg::primitive_integer(s);
  VectorQ out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = Rational(z(i));
  return out;
}

void check_profile(const MatrixQ& profile, const VectorQ& beta) {
  if (profile.cols() != beta.size()) throw DimensionError("profile has " + std::to_string(profile.cols()) +
                                                          " columns for a book of size " + std::to_string(beta.size()));
  if (profile.rows() == 0) throw Error("empty profile");
}

// Columns: one per vertex, then optionally t.  Rows: sum = 1, then beta.
LinearProgram weight_program(const MatrixQ& profile, const VectorQ& beta, bool with_t) {
  const Eigen::Index verts = profile.rows();
  const Eigen::Index k = profile.cols();
  LinearProgram lp;
  lp.goal = Goal::Maximize;
  lp.matrix = MatrixQ::Zero(k + 1, verts + (with_t ? 1 : 0));
  for (Eigen::Index v = 0; v < verts; ++v) {
    lp.matrix(0, v) = 1;
    lp.matrix.block(1, v, k, 1) = profile.row(v).transpose();
  }
  if (with_t) {
    // lambda_v = mu_v + t
    lp.matrix(0, verts) = Rational(static_cast<int>(verts));
    lp.matrix.block(1, verts, k, 1) = profile.colwise().sum().transpose();
  }
  lp.senses.assign(static_cast<std::size_t>(k + 1), Sense::Equal);
  lp.rhs = VectorQ(k + 1);
  lp.rhs(0) = 1;
  lp.rhs.tail(k) = beta;
  lp.objective = VectorQ::Zero(lp.matrix.cols());
  if (with_t) lp.objective(verts) = 1;
  return lp;
}

bool sure_loss(const MatrixQ& profile, const VectorQ& beta, const VectorQ& s) {
  const VectorQ b = balances(profile, beta, s);
  return (b.array() < Rational(0)).all();
}

bool boundary_stakes(const MatrixQ& profile, const VectorQ& beta, const VectorQ& s) {
  const VectorQ b = balances(profile, beta, s);
  return (b.array() <= Rational(0)).all() && (b.array() < Rational(0)).any();
}

Incoherent incoherent_from(const LpInfeasible& inf, const MatrixQ& profile, const VectorQ& beta) {
  const VectorQ s = primitive_stakes(inf.farkas.tail(beta.size()));
  if (!sure_loss(profile, beta, s)) throw Error("internal: Farkas stakes do not produce a sure loss");
  return Incoherent{s};
}

bool weights_ok(const MatrixQ& profile, const VectorQ& beta, const VectorQ& w) {
  if (w.size() != profile.rows()) return false;
  if ((w.array() < Rational(0)).any()) return false;
  if (w.sum() != 1) return false;
  return profile.transpose() * w == beta;
}

}  // namespace

Verdict decide_coherent_on_profile(const MatrixQ& profile, const VectorQ& beta) {
  check_profile(profile, beta);
  const auto lp = weight_program(profile, beta, false);
  const auto out = lp_solve(lp);
  if (const auto* inf = std::get_if<LpInfeasible>(&out)) return incoherent_from(*inf, profile, beta);
  return Coherent{std::get<LpOptimal>(out).primal};
}

std::optional<std::pair<VectorQ, Rational>> max_t_weights(const MatrixQ& profile, const VectorQ& beta) {
  check_profile(profile, beta);
  const auto lp = weight_program(profile, beta, true);
  const auto out = lp_solve(lp);
  const auto* opt = std::get_if<LpOptimal>(&out);
  if (opt == nullptr) return std::nullopt;
  const Eigen::Index verts = profile.rows();
  const Rational t = opt->primal(verts);
  VectorQ w = opt->primal.head(verts);
  w.array() += t;
  return std::make_pair(w, t);
}

Verdict decide_strict_on_profile(const MatrixQ& profile, const VectorQ& beta) {
  check_profile(profile, beta);
  const auto lp = weight_program(profile, beta, true);
  const auto out = lp_solve(lp);
  if (const auto* inf = std::get_if<LpInfeasible>(&out)) return incoherent_from(*inf, profile, beta);
  const auto* opt = std::get_if<LpOptimal>(&out);
  if (opt == nullptr) throw Error("internal: max-t program reported unbounded");
  const Eigen::Index verts = profile.rows();
  const Rational t = opt->primal(verts);
  VectorQ w = opt->primal.head(verts);
  w.array() += t;
  if (t > 0) return StrictlyCoherent{w};

  // Dual prices of the beta rows: s.(F(v) - beta) >= 0 for all v, with a
  // positive sum over v.
  VectorQ s = opt->dual.tail(beta.size());
  if (!s.isZero()) s = primitive_stakes(s);
  if (s.isZero() || !boundary_stakes(profile, beta, s)) {
    const RiskPolytope d = risk_polytope_of_profile(profile);
    bool found = false;
    for (const auto& f : d.polytope.facets()) {
      if (f.normal.dot(beta) != f.offset) continue;
      const VectorQ cand = primitive_stakes(-f.normal);
      if (boundary_stakes(profile, beta, cand)) {
        s = cand;
        found = true;
        break;
      }
    }
    if (!found) throw Error("internal: no boundary certificate for a coherent, non-strict book");
  }
  return CoherentNotStrict{w, s};
}

bool verify_certificate_on_profile(const Verdict& v, const MatrixQ& profile, const VectorQ& beta) {
  if (profile.cols() != beta.size()) return false;
  return std::visit(
      [&](const auto& arm) -> bool {
        using T = std::decay_t<decltype(arm)>;
        if constexpr (std::is_same_v<T, Incoherent>) {
          return arm.stakes.size() == beta.size() && sure_loss(profile, beta, arm.stakes);
        } else if constexpr (std::is_same_v<T, Coherent>) {
          return weights_ok(profile, beta, arm.weights);
        } else if constexpr (std::is_same_v<T, CoherentNotStrict>) {
          return weights_ok(profile, beta, arm.weights) && arm.stakes.size() == beta.size() &&
                 boundary_stakes(profile, beta, arm.stakes);
        } else {
          return weights_ok(profile, beta, arm.weights) && (arm.weights.array() > Rational(0)).all();
        }
      },
      v);
}

namespace {

MatrixQ book_profile(const Book& book, const RegularComplex& c) {
  if (book.empty()) throw Error("empty book");
  if (book.arity() > c.dimension()) throw DimensionError("book arity exceeds the complex dimension");
  return vertex_profile(book.formulas(), c);
}

RegularComplex book_complex(const Book& book) {
  if (book.empty()) throw Error("empty book");
  return linearize(book.formulas(), book.arity());
}

}  // namespace

Verdict decide_coherent(const Book& book, const RegularComplex& c) {
  return decide_coherent_on_profile(book_profile(book, c), book.values());
}

Verdict decide_coherent(const Book& book) { return decide_coherent(book, book_complex(book)); }

Verdict decide_strict(const Book& book, const RegularComplex& c) {
  return decide_strict_on_profile(book_profile(book, c), book.values());
}

Verdict decide_strict(const Book& book) { return decide_strict(book, book_complex(book)); }

bool verify_certificate(const Verdict& v, const Book& book, const RegularComplex& c) {
  MatrixQ profile;
  try {
    profile = book_profile(book, c);
  } catch (const Error&) {
    return false;
  }
  return verify_certificate_on_profile(v, profile, book.values());
}

bool ri_membership_crosscheck(const VectorQ& beta, const RiskPolytope& d) {
  return d.polytope.in_relative_interior(beta);
}

}  // namespace luka
