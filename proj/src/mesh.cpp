#include "mesh.hpp"

#include "luka/geometry.hpp"
#include "luka/linalg.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace luka::detail {

Mesh::Mesh(int n, std::vector<VectorQ> points, std::vector<std::vector<int>> cells)
    : n_(n), points_(std::move(points)), cells_(std::move(cells)) {
  star_.resize(points_.size());
  origin_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    origin_[c] = static_cast<int>(c);
    for (int v : cells_[c]) star_[static_cast<std::size_t>(v)].push_back(static_cast<int>(c));
  }
}

Mesh Mesh::from(const RegularComplex& c) {
  std::vector<std::vector<int>> cells;
  for (const auto& s : c.simplexes()) cells.emplace_back(s.begin(), s.end());
  return Mesh(c.dimension(), c.vertices(), std::move(cells));
}

int Mesh::add_point(VectorQ p) {
  points_.push_back(std::move(p));
  star_.emplace_back();
  return static_cast<int>(points_.size()) - 1;
}

const VectorZ& Mesh::homogeneous(int v) {
  if (hom_.size() < points_.size()) hom_.resize(points_.size());
  auto& h = hom_[static_cast<std::size_t>(v)];
  if (h.size() == 0) h = homogeneous_correspondent(points_[static_cast<std::size_t>(v)]);
  return h;
}

bool Mesh::has_edge(int u, int v) const {
  for (int c : star(u)) {
    const auto& cell = cells_[static_cast<std::size_t>(c)];
    if (std::find(cell.begin(), cell.end(), v) != cell.end()) return true;
  }
  return false;
}

std::vector<int> Mesh::neighbours(int v) const {
  std::vector<int> out;
  for (int c : star(v)) {
    for (int z : cells_[static_cast<std::size_t>(c)]) {
      if (z != v) out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<int, int>> Mesh::edges() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& cell : cells_) {
    for (std::size_t i = 0; i < cell.size(); ++i) {
      for (std::size_t j = i + 1; j < cell.size(); ++j) out.emplace_back(std::min(cell[i], cell[j]), std::max(cell[i], cell[j]));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Mesh::split_edge(int u, int v, int w) {
  std::vector<int> affected;
  for (int c : star(u)) {
    const auto& cell = cells_[static_cast<std::size_t>(c)];
    if (std::find(cell.begin(), cell.end(), v) != cell.end()) affected.push_back(c);
  }
  auto& sv = star_[static_cast<std::size_t>(v)];
  for (int c : affected) {
    auto copy = cells_[static_cast<std::size_t>(c)];
    std::replace(copy.begin(), copy.end(), u, w);
    const int fresh = static_cast<int>(cells_.size());
    auto& old = cells_[static_cast<std::size_t>(c)];
    std::replace(old.begin(), old.end(), v, w);
    for (int z : copy) {
      if (z != w) star_[static_cast<std::size_t>(z)].push_back(fresh);
    }
    sv.erase(std::find(sv.begin(), sv.end(), c));
    star_[static_cast<std::size_t>(w)].push_back(c);
    star_[static_cast<std::size_t>(w)].push_back(fresh);
    cells_.push_back(std::move(copy));
    origin_.push_back(origin_[static_cast<std::size_t>(c)]);
  }
}

void Mesh::split_face(const std::vector<int>& face, int w) {
  std::vector<int> affected;
  for (int c : star(face.front())) {
    const auto& cell = cells_[static_cast<std::size_t>(c)];
    if (std::all_of(face.begin(), face.end(), [&](int z) { return std::find(cell.begin(), cell.end(), z) != cell.end(); })) {
      affected.push_back(c);
    }
  }
  for (int c : affected) {
    const auto old = cells_[static_cast<std::size_t>(c)];
    for (std::size_t i = 1; i < face.size(); ++i) {
      auto copy = old;
      std::replace(copy.begin(), copy.end(), face[i], w);
      const int fresh = static_cast<int>(cells_.size());
      for (int z : copy) star_[static_cast<std::size_t>(z)].push_back(fresh);
      cells_.push_back(std::move(copy));
      origin_.push_back(origin_[static_cast<std::size_t>(c)]);
    }
    auto& first = cells_[static_cast<std::size_t>(c)];
    std::replace(first.begin(), first.end(), face.front(), w);
    auto& s0 = star_[static_cast<std::size_t>(face.front())];
    s0.erase(std::find(s0.begin(), s0.end(), c));
    star_[static_cast<std::size_t>(w)].push_back(c);
  }
}

RegularComplex Mesh::to_complex() const {
  std::vector<std::vector<std::size_t>> simplexes;
  simplexes.reserve(cells_.size());
  for (const auto& cell : cells_) simplexes.emplace_back(cell.begin(), cell.end());
  return RegularComplex(n_, points_, std::move(simplexes));
}

namespace {

Integer form_at(const AffineForm& h, const VectorZ& hom) { return h.dot(hom); }

}  // namespace

int blow_up(Mesh& m, const VectorQ& p, std::size_t& budget) {
  const int n = m.dimension();
  const VectorZ target = homogeneous_correspondent(p);
  std::vector<int> candidates(m.cells().size());
  for (std::size_t c = 0; c < candidates.size(); ++c) candidates[c] = static_cast<int>(c);
  for (;;) {
    std::vector<int> face;
    std::vector<Integer> coeff;
    for (int c : candidates) {
      const auto& cell = m.cell(static_cast<std::size_t>(c));
      MatrixQ a(n + 1, n + 1);
      for (int j = 0; j <= n; ++j) a.col(j) = m.homogeneous(cell[static_cast<std::size_t>(j)]).cast<Rational>();
      const auto sol = linalg::solve(a, VectorQ(target.cast<Rational>()));
      if (!sol || ((*sol).array() < Rational(0)).any()) continue;
      for (int j = 0; j <= n; ++j) {
        if ((*sol)(j) == 0) continue;
        if (denominator_of((*sol)(j)) != 1) throw Error("blow-up inside a simplex that is not unimodular");
        face.push_back(cell[static_cast<std::size_t>(j)]);
        coeff.push_back(numerator_of((*sol)(j)));
      }
      break;
    }
    if (face.empty()) throw Error("point outside the triangulation");
    if (face.size() == 1) return face.front();
    if (budget == 0) throw Error("subdivision limit exceeded while blowing up a point");
    --budget;
    VectorZ hw = VectorZ::Zero(n + 1);
    for (int z : face) hw += m.homogeneous(z);
    const int w = m.add_point(dehomogenize(hw));
    m.split_face(face, w);
    const bool done = std::all_of(coeff.begin(), coeff.end(), [](const Integer& a) { return a == 1; });
    if (done) return w;
    candidates = m.star(w);
  }
}

void regular_split(Mesh& m, const AffineForm& h, std::size_t& budget) {
  std::vector<Integer> level;
  auto level_of = [&](int v) -> Integer {
    while (level.size() <= static_cast<std::size_t>(v)) {
      level.push_back(form_at(h, m.homogeneous(static_cast<int>(level.size()))));
    }
    return level[static_cast<std::size_t>(v)];
  };
  using Item = std::tuple<Integer, int, int>;
  std::set<Item> queue;
  auto consider = [&](int a, int b) {
    const Integer la = level_of(a);
    const Integer lb = level_of(b);
    if ((la > 0 && lb < 0) || (la < 0 && lb > 0)) {
      queue.emplace(abs(la) + abs(lb), std::min(a, b), std::max(a, b));
    }
  };
  for (const auto& [a, b] : m.edges()) consider(a, b);
  while (!queue.empty()) {
    auto top = std::prev(queue.end());
    const auto [weight, u, v] = *top;
    queue.erase(top);
    if (!m.has_edge(u, v)) continue;
    if (budget == 0) throw Error("subdivision limit exceeded while splitting by a hyperplane");
    --budget;
    VectorZ hw = m.homogeneous(u);
    hw += m.homogeneous(v);
    const int w = m.add_point(dehomogenize(hw));
    m.split_edge(u, v, w);
    for (int z : m.neighbours(w)) consider(w, z);
  }
}

std::vector<int> exact_split(Mesh& m, const std::vector<Rational>& value, Carried* carried) {
  std::vector<int> fresh;
  for (const auto& [u, v] : m.edges()) {
    const Rational& a = value[static_cast<std::size_t>(u)];
    const Rational& b = value[static_cast<std::size_t>(v)];
    if (!((a > 0 && b < 0) || (a < 0 && b > 0))) continue;
    const Rational t = a / (a - b);
    const VectorQ& pu = m.points()[static_cast<std::size_t>(u)];
    const VectorQ& pv = m.points()[static_cast<std::size_t>(v)];
    VectorQ p = pu + (pv - pu) * t;
    const int w = m.add_point(std::move(p));
    m.split_edge(u, v, w);
    fresh.push_back(w);
    if (carried != nullptr) {
      const auto& ru = (*carried)[static_cast<std::size_t>(u)];
      const auto& rv = (*carried)[static_cast<std::size_t>(v)];
      std::vector<Rational> row(ru.size());
      for (std::size_t i = 0; i < ru.size(); ++i) row[i] = ru[i] + (rv[i] - ru[i]) * t;
      carried->push_back(std::move(row));
    }
  }
  return fresh;
}

namespace {

Rational split_value(Connective op, const Rational& a, const Rational& b) {
  switch (op) {
    case Connective::Oplus:
    case Connective::Odot: return a + b - 1;
    case Connective::Implies: return b - a;
    case Connective::Meet:
    case Connective::Join: return a - b;
    default: return Rational(0);
  }
}

}  // namespace

Carried decompose(Mesh& m, const FormulaProgram& prog, Carried* carried) {
  Carried vals;
  vals.reserve(m.points().size());
  for (const auto& p : m.points()) vals.push_back(prog.run(p));
  const auto& code = prog.instructions();
  std::vector<Rational> s;
  for (std::size_t k = 0; k < code.size(); ++k) {
    const auto& in = code[k];
    if (in.rhs < 0) continue;
    s.resize(vals.size());
    bool pos = false;
    bool neg = false;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      s[i] = split_value(in.op, vals[i][static_cast<std::size_t>(in.lhs)], vals[i][static_cast<std::size_t>(in.rhs)]);
      pos = pos || s[i] > 0;
      neg = neg || s[i] < 0;
    }
    if (!(pos && neg)) continue;
    for (int w : exact_split(m, s, carried)) vals.push_back(prog.run(m.points()[static_cast<std::size_t>(w)]));
  }
  return vals;
}

AffinePiece fit_piece(const std::vector<const VectorQ*>& pts, const std::vector<Rational>& values) {
  const Eigen::Index n = pts.front()->size();
  MatrixQ a(static_cast<Eigen::Index>(pts.size()), n + 1);
  VectorQ b(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)).head(n) = pts[i]->transpose();
    a(static_cast<Eigen::Index>(i), n) = 1;
    b(static_cast<Eigen::Index>(i)) = values[i];
  }
  const auto sol = linalg::solve(a, b);
  if (!sol) throw Error("fit_piece: inconsistent values");
  return AffinePiece{sol->head(n), (*sol)(n)};
}

}  // namespace luka::detail
