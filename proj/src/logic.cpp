#include "luka/logic.hpp"

#include "luka/linalg.hpp"
#include "luka/lp.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

namespace luka {

using detail::Carried;
using detail::Mesh;
using detail::PLView;

bool Polyhedron::contains(const VectorQ& x) const {
  return std::any_of(pieces.begin(), pieces.end(), [&](const Polytope& p) { return p.contains(x); });
}

namespace {

int resolve_dimension(int n, int arity) { return std::max({n, arity, 1}); }

struct FormLess {
  bool operator()(const AffineForm& a, const AffineForm& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

Rational form_value(const AffineForm& l, const VectorQ& x) {
  const Eigen::Index n = l.size() - 1;
  Rational v(l(n));
  for (Eigen::Index i = 0; i < n; ++i) v += Rational(l(i)) * x(i);
  return v;
}

Rational clamp01(const Rational& v) {
  if (v < 0) return Rational(0);
  if (v > 1) return Rational(1);
  return v;
}

// Constant-folding constructors.

bool is_zero(const Formula& f) { return f.kind() == Connective::Zero; }
bool is_one(const Formula& f) { return f.kind() == Connective::One; }

Formula s_neg(const Formula& f) {
  if (is_zero(f)) return Formula::one();
  if (is_one(f)) return Formula::zero();
  if (f.kind() == Connective::Neg) return f.child();
  return Formula::neg(f);
}

Formula s_oplus(const Formula& a, const Formula& b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_one(a) || is_one(b)) return Formula::one();
  return Formula::oplus(a, b);
}

Formula s_odot(const Formula& a, const Formula& b) {
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (is_zero(a) || is_zero(b)) return Formula::zero();
  return Formula::odot(a, b);
}

Formula s_meet(const Formula& a, const Formula& b) {
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (is_zero(a) || is_zero(b)) return Formula::zero();
  return Formula::meet(a, b);
}

Formula s_join(const Formula& a, const Formula& b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_one(a) || is_one(b)) return Formula::one();
  return Formula::join(a, b);
}

using Combine = Formula (*)(const Formula&, const Formula&);

Formula balanced(Combine op, const std::vector<Formula>& items, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return items[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return op(balanced(op, items, lo, mid), balanced(op, items, mid, hi));
}

Formula balanced(Combine op, const std::vector<Formula>& items, const Formula& empty) {
  if (items.empty()) return empty;
  return balanced(op, items, 0, items.size());
}

// min(1, max(0, l)) by peeling odd coefficients and halving even ones:
//   T(a + x) = T(a) + (T(a + 1) * x)
//   T(a - x) = T(a - 1) + (T(a) * ~x)
//   T(2m) = T(m) + T(m),  T(2m - 1) = T(m) * T(m)
class ClampSynth {
 public:
  Formula operator()(const AffineForm& l) {
    if (auto it = memo_.find(l); it != memo_.end()) return it->second;
    Formula out = build(l);
    memo_.emplace(l, out);
    return out;
  }

  /// Result of the exact verification of the term of l, computed once.
  bool verified(const AffineForm& l);

 private:
  Formula build(const AffineForm& l) {
    const Eigen::Index n = l.size() - 1;
    Integer lo = l(n);
    Integer hi = l(n);
    int nonzero = 0;
    Eigen::Index last = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (l(i) < 0) lo += l(i);
      if (l(i) > 0) hi += l(i);
      if (l(i) != 0) {
        ++nonzero;
        last = i;
      }
    }
    if (hi <= 0) return Formula::zero();
    if (lo >= 1) return Formula::one();
    if (nonzero == 1) {
      const Formula x = Formula::var(static_cast<int>(last) + 1);
      if (l(last) == 1 && l(n) == 0) return x;
      if (l(last) == -1 && l(n) == 1) return Formula::neg(x);
    }
    Eigen::Index odd = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (integer_odd(l(i))) odd = i;
    }
    if (odd < 0) {
      AffineForm m = l;
      if (integer_odd(l(n))) {
        m(n) += 1;
        for (Eigen::Index i = 0; i <= n; ++i) m(i) /= 2;
        const Formula t = (*this)(m);
        return s_odot(t, t);
      }
      for (Eigen::Index i = 0; i <= n; ++i) m(i) /= 2;
      const Formula t = (*this)(m);
      return s_oplus(t, t);
    }
    const Formula x = Formula::var(static_cast<int>(odd) + 1);
    AffineForm a = l;
    if (l(odd) > 0) {
      a(odd) -= 1;
      AffineForm up = a;
      up(n) += 1;
      return s_oplus((*this)(a), s_odot((*this)(up), x));
    }
    a(odd) += 1;
    AffineForm down = a;
    down(n) -= 1;
    return s_oplus((*this)(down), s_odot((*this)(a), s_neg(x)));
  }

  static bool integer_odd(const Integer& z) { return (z % 2) != 0; }

  std::map<AffineForm, Formula, FormLess> memo_;
  std::map<AffineForm, bool, FormLess> checked_;
};

// Views: a triangulation on which a list of functions is affine per cell.

PLView view_of(const std::vector<Formula>& fs, int n) {
  Mesh m = Mesh::from(kuhn_base(n));
  const FormulaProgram prog(fs);
  const Carried all = detail::decompose(m, prog);
  Carried values(all.size());
  for (std::size_t v = 0; v < all.size(); ++v) {
    for (std::size_t r = 0; r < fs.size(); ++r) values[v].push_back(all[v][static_cast<std::size_t>(prog.root_slot(r))]);
  }
  return PLView{std::move(m), std::move(values)};
}

void add_to_view(PLView& view, const std::vector<Formula>& fs) {
  const FormulaProgram prog(fs);
  const Carried all = detail::decompose(view.mesh, prog, &view.values);
  for (std::size_t v = 0; v < all.size(); ++v) {
    for (std::size_t r = 0; r < fs.size(); ++r) {
      view.values[v].push_back(all[v][static_cast<std::size_t>(prog.root_slot(r))]);
    }
  }
}

void split_view(PLView& view, const std::function<Rational(const VectorQ&)>& g) {
  std::vector<Rational> s;
  s.reserve(view.mesh.points().size());
  for (const auto& p : view.mesh.points()) s.push_back(g(p));
  detail::exact_split(view.mesh, s, &view.values);
}

void split_view_by_polytope(PLView& view, const Polytope& p) {
  for (const auto& f : p.facets()) {
    split_view(view, [&](const VectorQ& x) { return Rational(f.normal.dot(x) - f.offset); });
  }
  const MatrixQ& eq = p.hull_equations();
  for (Eigen::Index r = 0; r < eq.rows(); ++r) {
    split_view(view, [&](const VectorQ& x) { return Rational(eq.row(r).dot(x) - p.hull_rhs()(r)); });
  }
}

std::optional<int> exponent_on(const PLView& view, std::size_t phi, std::size_t psi) {
  Rational need(1);
  for (const auto& row : view.values) {
    const Rational& a = row[phi];
    const Rational& b = row[psi];
    if (a == 1) {
      if (b != 1) return std::nullopt;
      continue;
    }
    need = std::max(need, Rational((1 - b) / (1 - a)));
  }
  const Integer num = numerator_of(need);
  const Integer den = denominator_of(need);
  const Integer n = (num + den - 1) / den;
  if (n > INT_MAX) throw Error("deduction exponent exceeds the integer range");
  return static_cast<int>(n);
}

AffineForm primitive_form(const VectorQ& h) {
  AffineForm z = linalg::primitive_integer(h);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) != 0) {
      if (z(i) < 0) z = -z;
      break;
    }
  }
  return z;
}

bool whole_cube(const Polytope& p) {
  const int k = p.ambient_dimension();
  if (p.dimension() != k) return false;
  for (int mask = 0; mask < (1 << k); ++mask) {
    VectorQ corner(k);
    for (int i = 0; i < k; ++i) corner(i) = (mask >> i) & 1;
    if (!p.contains(corner)) return false;
  }
  return true;
}

// Hats as max-min formulas of clamped barycentric pieces.  The formula of a
// hat at v is the join over the simplexes T around v of the meet of the
// clamps of every piece lying above the piece of T on T.

struct HatPlan {
  std::vector<std::size_t> star;
  std::vector<std::size_t> piece_of;
  std::vector<AffinePiece> pieces;
  std::vector<AffineForm> forms;
  std::vector<std::vector<std::size_t>> terms;
  std::vector<Formula> term_formulas;
  Formula formula = Formula::zero();
};

AffineForm integral_form(const AffinePiece& p) {
  const auto n = p.coefficients.size();
  AffineForm l(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) l(i) = numerator_of(p.coefficients(i));
  l(n) = numerator_of(p.constant);
  return l;
}

std::vector<std::size_t> star_of(const RegularComplex& c, std::size_t v) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < c.simplex_count(); ++t) {
    const auto& s = c.simplex(t);
    if (std::find(s.begin(), s.end(), v) != s.end()) out.push_back(t);
  }
  return out;
}

// Piece of the hat at v on a simplex t containing v.
AffinePiece hat_piece(const RegularComplex& c, std::size_t t, std::size_t v) {
  const auto& s = c.simplex(t);
  const auto i = static_cast<Eigen::Index>(std::find(s.begin(), s.end(), v) - s.begin());
  const auto row = c.barycentric_map(t).row(i);
  AffinePiece p{row.head(c.dimension()).transpose(), row(c.dimension())};
  if (!p.is_integral()) throw Error("hat piece with non-integer coefficients; the complex is not regular");
  return p;
}

HatPlan plan_hat(const RegularComplex& c, std::size_t apex, ClampSynth& clamp) {
  HatPlan plan;
  plan.star = star_of(c, apex);
  const auto& star = plan.star;
  auto& piece_of = plan.piece_of;
  piece_of.resize(star.size());
  for (std::size_t i = 0; i < star.size(); ++i) {
    const AffinePiece p = hat_piece(c, star[i], apex);
    auto it = std::find(plan.pieces.begin(), plan.pieces.end(), p);
    piece_of[i] = static_cast<std::size_t>(it - plan.pieces.begin());
    if (it == plan.pieces.end()) plan.pieces.push_back(p);
  }
  std::vector<Formula> clamps;
  for (const auto& p : plan.pieces) {
    plan.forms.push_back(integral_form(p));
    clamps.push_back(clamp(plan.forms.back()));
  }
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t i = 0; i < star.size(); ++i) {
    const AffinePiece& own = plan.pieces[piece_of[i]];
    std::vector<std::size_t> above;
    for (std::size_t j = 0; j < plan.pieces.size(); ++j) {
      bool ok = true;
      for (auto w : c.simplex(star[i])) ok = ok && plan.pieces[j](c.vertex(w)) >= own(c.vertex(w));
      if (ok) above.push_back(j);
    }
    if (!seen.insert(above).second) continue;
    std::vector<Formula> meets;
    for (auto j : above) meets.push_back(clamps[j]);
    plan.terms.push_back(above);
    plan.term_formulas.push_back(balanced(s_meet, meets, Formula::one()));
  }
  plan.formula = balanced(s_join, plan.term_formulas, Formula::zero());
  return plan;
}

// rows[j][w]: value of piece j minus the hat piece at vertex w of a simplex.
// True when min_j of the pieces stays below the hat piece on the whole
// simplex, i.e. when max over the simplex of min_j rows[j] is <= 0.
bool min_stays_below(const std::vector<std::vector<Rational>>& rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto w = static_cast<Eigen::Index>(rows.front().size());
  LinearProgram lp;
  lp.goal = Goal::Maximize;
  lp.objective = VectorQ::Zero(w + 1);
  lp.objective(w) = 1;
  lp.matrix = MatrixQ::Zero(m + 1, w + 1);
  lp.rhs = VectorQ::Zero(m + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < w; ++i) lp.matrix(j, i) = -rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    lp.matrix(j, w) = 1;
    lp.senses.push_back(Sense::LessEqual);
  }
  for (Eigen::Index i = 0; i < w; ++i) lp.matrix(m, i) = 1;
  lp.rhs(m) = 1;
  lp.senses.push_back(Sense::Equal);
  lp.free.assign(static_cast<std::size_t>(w + 1), false);
  lp.free.back() = true;
  const auto out = lp_solve(lp);
  const auto* opt = std::get_if<LpOptimal>(&out);
  if (opt == nullptr || !verify_optimal(lp, *opt)) throw Error("internal: hat verification program failed");
  return opt->value <= 0;
}

// The formula equals the hat on every simplex T' of c, given that each clamp
// term is exact.  Below: the term of T' is the clamp of the piece of T'
// there, since every piece of that term lies above it on T'.  Above: for
// every term the min of its pieces stays below the piece of T' on T', checked
// at the vertices for a single piece and by a small program otherwise.
void verify_hat(const RegularComplex& c, std::size_t apex, const HatPlan& plan) {
  const std::size_t nv = c.vertex_count();
  std::vector<std::vector<char>> below(plan.pieces.size(), std::vector<char>(nv));
  for (std::size_t j = 0; j < plan.pieces.size(); ++j) {
    for (std::size_t w = 0; w < nv; ++w) below[j][w] = plan.pieces[j](c.vertex(w)) <= Rational(w == apex ? 1 : 0);
  }
  std::size_t next = 0;
  for (std::size_t t = 0; t < c.simplex_count(); ++t) {
    const auto& s = c.simplex(t);
    if (next < plan.star.size() && plan.star[next] == t) {
      const AffinePiece& own = plan.pieces[plan.piece_of[next++]];
      bool found = false;
      for (const auto& term : plan.terms) {
        bool has_own = false;
        bool above = true;
        for (auto j : term) {
          has_own = has_own || plan.pieces[j] == own;
          for (auto w : s) above = above && plan.pieces[j](c.vertex(w)) >= own(c.vertex(w));
        }
        found = found || (has_own && above);
      }
      if (!found) throw Error("internal: hat formula verification failed");
    }
    for (std::size_t i = 0; i < plan.terms.size(); ++i) {
      const bool cheap = std::any_of(plan.terms[i].begin(), plan.terms[i].end(), [&](std::size_t j) {
        return std::all_of(s.begin(), s.end(), [&](std::size_t w) { return below[j][w] != 0; });
      });
      if (cheap) continue;
      std::vector<std::vector<Rational>> rows;
      for (auto j : plan.terms[i]) {
        rows.emplace_back();
        for (auto w : s) rows.back().push_back(plan.pieces[j](c.vertex(w)) - Rational(w == apex ? 1 : 0));
      }
      if (!min_stays_below(rows)) throw Error("internal: hat formula verification failed");
    }
  }
}

// Synthesized formulas with the exact function they were verified against.
// Onesets, validity and exponents of these formulas are read off the stored
// triangulation instead of subdividing their (large) syntax trees.

class Registry {
 public:
  void add(const Formula& f, int n, PLView view) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (count_ >= kCapacity) {
      entries_.clear();
      count_ = 0;
    }
    entries_[f.hash()].push_back(Entry{f, n, std::make_shared<const PLView>(std::move(view))});
    ++count_;
  }

  std::shared_ptr<const PLView> find(const Formula& f, int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(f.hash());
    if (it == entries_.end()) return nullptr;
    for (const auto& e : it->second) {
      if (e.n == n && e.formula == f) return e.view;
    }
    return nullptr;
  }

 private:
  struct Entry {
    Formula formula;
    int n;
    std::shared_ptr<const PLView> view;
  };
  static constexpr std::size_t kCapacity = 1024;
  std::mutex mutex_;
  std::unordered_map<std::size_t, std::vector<Entry>> entries_;
  std::size_t count_ = 0;
};

Registry& registry() {
  static Registry r;
  return r;
}

PLView complex_view(const RegularComplex& c, const std::vector<std::vector<Rational>>& columns) {
  PLView view{Mesh::from(c), Carried(c.vertex_count())};
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    for (const auto& col : columns) view.values[v].push_back(col[v]);
  }
  return view;
}

std::vector<Rational> indicator(std::size_t size, const std::vector<std::size_t>& on) {
  std::vector<Rational> out(size, Rational(0));
  for (auto v : on) out[v] = 1;
  return out;
}

// Strong disjunction of verified hats at `apexes`; registered with its values.
Formula faces_formula(const RegularComplex& c, const std::vector<std::size_t>& apexes, ClampSynth& clamp) {
  std::vector<Formula> parts;
  for (auto v : apexes) {
    if (v >= c.vertex_count()) throw Error("vertex index out of range");
    const HatPlan plan = plan_hat(c, v, clamp);
    verify_hat(c, v, plan);
    parts.push_back(plan.formula);
  }
  Formula out = balanced(s_oplus, parts, Formula::zero());
  registry().add(out, c.dimension(), complex_view(c, {indicator(c.vertex_count(), apexes)}));
  return out;
}

std::vector<std::size_t> vertices_in(const RegularComplex& c, const Polytope& p) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    if (p.contains(c.vertex(v))) out.push_back(v);
  }
  return out;
}

std::vector<AffineForm> planes_of(const Polytope& p) {
  const int k = p.ambient_dimension();
  std::set<AffineForm, FormLess> planes;
  for (const auto& f : p.facets()) {
    VectorQ h(k + 1);
    h.head(k) = f.normal;
    h(k) = -f.offset;
    planes.insert(primitive_form(h));
  }
  const MatrixQ& eq = p.hull_equations();
  for (Eigen::Index r = 0; r < eq.rows(); ++r) {
    VectorQ h(k + 1);
    h.head(k) = eq.row(r).transpose();
    h(k) = -p.hull_rhs()(r);
    planes.insert(primitive_form(h));
  }
  return {planes.begin(), planes.end()};
}

void check_in_cube(const Polytope& p) {
  for (const auto& x : p.extremals()) {
    if (!in_unit_cube(x)) throw Error("polytope is not contained in the unit cube");
  }
}

Polytope facet_polytope(const Polytope& d, const Facet& f) {
  std::vector<VectorQ> pts;
  for (auto i : f.vertices) pts.push_back(d.extremals()[i]);
  return convex_hull(pts);
}

// Appends the pointwise max of `cols`, splitting where two of them cross.
std::size_t append_max(PLView& view, const std::vector<std::size_t>& cols) {
  const std::size_t r = view.values.empty() ? 0 : view.values.front().size();
  for (auto& row : view.values) row.push_back(cols.empty() ? Rational(0) : row[cols.front()]);
  for (std::size_t i = 1; i < cols.size(); ++i) {
    std::vector<Rational> s;
    s.reserve(view.values.size());
    for (const auto& row : view.values) s.push_back(row[r] - row[cols[i]]);
    detail::exact_split(view.mesh, s, &view.values);
    for (auto& row : view.values) {
      if (row[cols[i]] > row[r]) row[r] = row[cols[i]];
    }
  }
  return r;
}

PLView single_view(const Formula& f, int n) {
  if (auto hit = registry().find(f, n)) return *hit;
  return view_of({f}, n);
}

// Value at x of column 0 of a view, by locating x in one of its cells.
Rational value_in(const PLView& view, const VectorQ& x) {
  const int n = view.mesh.dimension();
  for (const auto& cell : view.mesh.cells()) {
    MatrixQ a(n + 1, n + 1);
    VectorQ b(n + 1);
    for (int j = 0; j <= n; ++j) {
      a.col(j).head(n) = view.mesh.points()[static_cast<std::size_t>(cell[static_cast<std::size_t>(j)])];
      a(n, j) = 1;
    }
    b.head(n) = x;
    b(n) = 1;
    const auto lambda = linalg::solve(a, b);
    if (!lambda || ((*lambda).array() < Rational(0)).any()) continue;
    Rational out(0);
    for (int j = 0; j <= n; ++j) out += (*lambda)(j) * view.values[static_cast<std::size_t>(cell[static_cast<std::size_t>(j)])][0];
    return out;
  }
  throw Error("internal: point outside the triangulation");
}

// Appends the column 0 of `other` to `view`, refining view along every
// hyperplane spanned by a facet of a cell of `other`.
void overlay(PLView& view, const PLView& other) {
  const int n = view.mesh.dimension();
  std::set<AffineForm, FormLess> planes;
  for (const auto& cell : other.mesh.cells()) {
    for (std::size_t skip = 0; skip < cell.size(); ++skip) {
      MatrixQ a(n, n + 1);
      Eigen::Index r = 0;
      for (std::size_t j = 0; j < cell.size(); ++j) {
        if (j == skip) continue;
        a.row(r).head(n) = other.mesh.points()[static_cast<std::size_t>(cell[j])].transpose();
        a(r++, n) = 1;
      }
      const MatrixQ ns = linalg::nullspace(a);
      if (ns.cols() != 1) throw Error("internal: degenerate cell");
      planes.insert(primitive_form(ns.col(0)));
    }
  }
  for (const auto& h : planes) split_view(view, [&](const VectorQ& x) { return form_value(h, x); });
  for (std::size_t v = 0; v < view.values.size(); ++v) view.values[v].push_back(value_in(other, view.mesh.points()[v]));
}

// View with phi in column 0 and psi in column 1.
PLView joint_view(const Formula& phi, const Formula& psi, int n) {
  auto a = registry().find(phi, n);
  auto b = registry().find(psi, n);
  if (!a && !b) return view_of({phi, psi}, n);
  if (a && b) {
    PLView view = *a;
    overlay(view, *b);
    return view;
  }
  PLView view = a ? *a : *b;
  add_to_view(view, {a ? psi : phi});
  if (!a) {
    for (auto& row : view.values) std::swap(row[0], row[1]);
  }
  return view;
}

}  // namespace

// ---------------------------------------------------------------------------

Polyhedron mod_of(const Formula& f, int n) {
  n = resolve_dimension(n, f.arity());
  const PLView view = single_view(f, n);
  std::set<std::vector<int>> faces;
  for (const auto& cell : view.mesh.cells()) {
    std::vector<int> ones;
    for (int v : cell) {
      if (view.values[static_cast<std::size_t>(v)][0] == 1) ones.push_back(v);
    }
    std::sort(ones.begin(), ones.end());
    if (!ones.empty()) faces.insert(ones);
  }
  Polyhedron out;
  for (const auto& face : faces) {
    const bool covered = std::any_of(faces.begin(), faces.end(), [&](const std::vector<int>& other) {
      return other.size() > face.size() && std::includes(other.begin(), other.end(), face.begin(), face.end());
    });
    if (covered) continue;
    std::vector<VectorQ> pts;
    for (int v : face) pts.push_back(view.mesh.points()[static_cast<std::size_t>(v)]);
    out.pieces.push_back(convex_hull(pts));
  }
  return out;
}

bool oneset_equals(const Formula& f, const std::vector<Polytope>& target, int n) {
  n = resolve_dimension(n, f.arity());
  for (const auto& p : target) {
    if (p.ambient_dimension() != n) throw DimensionError("target polytope lives in the wrong dimension");
  }
  PLView view = single_view(f, n);
  for (const auto& p : target) split_view_by_polytope(view, p);
  const auto& pts = view.mesh.points();
  std::vector<bool> one(pts.size());
  std::vector<std::vector<bool>> inside(target.size(), std::vector<bool>(pts.size()));
  for (std::size_t v = 0; v < pts.size(); ++v) {
    one[v] = view.values[v][0] == 1;
    for (std::size_t i = 0; i < target.size(); ++i) inside[i][v] = target[i].contains(pts[v]);
  }
  for (const auto& cell : view.mesh.cells()) {
    const unsigned subsets = 1U << cell.size();
    for (unsigned mask = 1; mask < subsets; ++mask) {
      bool all_one = true;
      std::vector<bool> in(target.size(), true);
      for (std::size_t j = 0; j < cell.size(); ++j) {
        if (((mask >> j) & 1U) == 0) continue;
        const auto v = static_cast<std::size_t>(cell[j]);
        all_one = all_one && one[v];
        for (std::size_t i = 0; i < target.size(); ++i) in[i] = in[i] && inside[i][v];
      }
      const bool in_some = std::find(in.begin(), in.end(), true) != in.end();
      if (all_one != in_some) return false;
    }
  }
  return true;
}

bool verify_affine_term(const Formula& t, const AffineForm& l) {
  const int n = static_cast<int>(l.size()) - 1;
  if (n < 1 || t.arity() > n) return false;
  PLView view = view_of({t}, n);
  split_view(view, [&](const VectorQ& x) { return form_value(l, x); });
  split_view(view, [&](const VectorQ& x) { return Rational(form_value(l, x) - 1); });
  for (std::size_t v = 0; v < view.values.size(); ++v) {
    if (view.values[v][0] != clamp01(form_value(l, view.mesh.points()[v]))) return false;
  }
  return true;
}

bool ClampSynth::verified(const AffineForm& l) {
  if (auto it = checked_.find(l); it != checked_.end()) return it->second;
  const bool ok = verify_affine_term((*this)(l), l);
  checked_.emplace(l, ok);
  return ok;
}

Formula synth_affine_term(const AffineForm& l) {
  if (l.size() < 2) throw DimensionError("affine form needs at least one variable");
  ClampSynth clamp;
  if (!clamp.verified(l)) throw Error("internal: affine term verification failed");
  return clamp(l);
}

std::vector<Formula> synth_hat_formulas(const RegularComplex& c, const std::vector<std::size_t>& apexes) {
  std::vector<std::size_t> which = apexes;
  if (which.empty()) {
    for (std::size_t v = 0; v < c.vertex_count(); ++v) which.push_back(v);
  }
  ClampSynth clamp;
  std::vector<Formula> out;
  for (auto v : which) {
    if (v >= c.vertex_count()) throw Error("vertex index out of range");
    const HatPlan plan = plan_hat(c, v, clamp);
    verify_hat(c, v, plan);
    registry().add(plan.formula, c.dimension(), complex_view(c, {indicator(c.vertex_count(), {v})}));
    out.push_back(plan.formula);
  }
  return out;
}

RegularComplex supporting_complex(const Polytope& p) {
  check_in_cube(p);
  Mesh m = Mesh::from(kuhn_base(p.ambient_dimension()));
  std::size_t budget = limits().max_subdivisions;
  for (const auto& x : p.extremals()) detail::blow_up(m, x, budget);
  if (p.dimension() > 0) {
    for (const auto& h : planes_of(p)) detail::regular_split(m, h, budget);
  }
  return m.to_complex();
}

Formula synth_polytope_formula(const Polytope& p) {
  check_in_cube(p);
  if (whole_cube(p)) return Formula::one();
  const RegularComplex c = supporting_complex(p);
  ClampSynth clamp;
  return faces_formula(c, vertices_in(c, p), clamp);
}

Formula synth_faces_formula(const RegularComplex& c, const std::vector<std::size_t>& vertices) {
  ClampSynth clamp;
  return faces_formula(c, vertices, clamp);
}

namespace {

struct Boundary {
  Formula formula = Formula::zero();
  std::vector<std::vector<Rational>> facets;
};

Boundary boundary_on(const Polytope& d, const RegularComplex& c, ClampSynth& clamp) {
  Boundary out;
  if (d.dimension() == 0) return out;
  std::vector<Formula> parts;
  for (const auto& f : d.facets()) {
    const auto on = vertices_in(c, facet_polytope(d, f));
    parts.push_back(faces_formula(c, on, clamp));
    out.facets.push_back(indicator(c.vertex_count(), on));
  }
  out.formula = balanced(s_join, parts, Formula::zero());
  PLView view = complex_view(c, out.facets);
  std::vector<std::size_t> cols(out.facets.size());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  const std::size_t r = append_max(view, cols);
  for (auto& row : view.values) row = {row[r]};
  registry().add(out.formula, c.dimension(), std::move(view));
  return out;
}

}  // namespace

Formula synth_boundary_formula(const Polytope& d) {
  check_in_cube(d);
  const RegularComplex c = supporting_complex(d);
  ClampSynth clamp;
  return boundary_on(d, c, clamp).formula;
}

Formula synth_boundary_formula(const std::vector<Formula>& phi) {
  if (phi.empty()) throw Error("empty formula list");
  return synth_boundary_formula(risk_polytope(phi, linearize(phi)).polytope);
}

bool is_valid(const Formula& f, int n) {
  n = resolve_dimension(n, f.arity());
  const PLView view = single_view(f, n);
  return std::all_of(view.values.begin(), view.values.end(), [](const auto& row) { return row[0] == 1; });
}

std::optional<int> deduction_exponent(const Formula& phi, const Formula& psi, int n) {
  n = resolve_dimension(n, std::max(phi.arity(), psi.arity()));
  return exponent_on(joint_view(phi, psi, n), 0, 1);
}

// ---------------------------------------------------------------------------

struct CoherenceTheory::Data {
  std::shared_ptr<const RegularComplex> complex;
  PLFunction inside;
  std::vector<PLFunction> facets;
};

CoherenceTheory::CoherenceTheory(std::vector<Formula> phi)
    : phi_(std::move(phi)), pi_phi_(Formula::zero()), pi_rb_(Formula::zero()) {
  if (phi_.empty()) throw Error("empty formula list");
  risk_ = risk_polytope(phi_, linearize(phi_));
  const Polytope& d = risk_.polytope;
  auto c = std::make_shared<const RegularComplex>(supporting_complex(d));
  ClampSynth clamp;
  const auto in_d = vertices_in(*c, d);
  pi_phi_ = whole_cube(d) ? Formula::one() : faces_formula(*c, in_d, clamp);
  Boundary rb = boundary_on(d, *c, clamp);
  pi_rb_ = rb.formula;
  std::vector<PLFunction> facets;
  for (auto& col : rb.facets) facets.emplace_back(c, std::move(col));
  PLFunction inside(c, indicator(c->vertex_count(), in_d));
  data_ = std::make_shared<const Data>(Data{c, std::move(inside), std::move(facets)});
}

const RegularComplex& CoherenceTheory::complex() const { return *data_->complex; }

LogicVerdict logic_coherence_check(const CoherenceTheory& theory, const VectorQ& beta) {
  if (beta.size() != theory.dimension()) throw DimensionError("book size does not match the events");
  if (!in_unit_cube(beta)) throw Error("book values must lie in [0,1]");
  const auto& data = theory.data();
  const RegularComplex& base = *data.complex;
  const RegularComplex c = blow_up(base, beta);
  const auto apex = c.find_vertex(beta);
  if (!apex) throw Error("internal: book is not a vertex of its supporting complex");

  LogicVerdict out;
  ClampSynth clamp;
  out.pi_beta = faces_formula(c, {*apex}, clamp);

  // columns: pi_beta, polytope formula, facet formulas, then their join
  PLView view{Mesh::from(c), Carried(c.vertex_count())};
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    auto& row = view.values[v];
    const auto old = base.find_vertex(c.vertex(v));
    row.push_back(Rational(v == *apex ? 1 : 0));
    row.push_back(old ? data.inside.values()[*old] : data.inside(c.vertex(v)));
    for (const auto& fc : data.facets) row.push_back(old ? fc.values()[*old] : fc(c.vertex(v)));
  }
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < data.facets.size(); ++i) cols.push_back(2 + i);
  const std::size_t rb = append_max(view, cols);
  out.exponent_polytope = exponent_on(view, 0, 1);
  out.exponent_boundary = exponent_on(view, 0, rb);
  out.coherent = out.exponent_polytope.has_value();
  out.strict = out.coherent && !out.exponent_boundary.has_value();
  return out;
}

LogicVerdict logic_coherence_check(const Book& book) {
  return logic_coherence_check(CoherenceTheory(book.formulas()), book.values());
}

}  // namespace luka
