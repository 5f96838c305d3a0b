#include "luka/complex.hpp"

#include "luka/geometry.hpp"
#include "luka/linalg.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

namespace luka {

using detail::Mesh;

Limits limits() {
  Limits l;
  if (const char* env = std::getenv("LUKA_MAX_DIM")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 12) l.max_dimension = static_cast<int>(v);
  }
  return l;
}

namespace {

void check_dimension(int n) {
  const int cap = limits().max_dimension;
  if (n < 1 || n > cap) {
    throw DimensionError("dimension " + std::to_string(n) + " outside the supported range 1.." + std::to_string(cap));
  }
}

struct FormLess {
  bool operator()(const AffineForm& a, const AffineForm& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// RegularComplex

RegularComplex::RegularComplex(int n, std::vector<VectorQ> vertices, std::vector<std::vector<std::size_t>> simplexes)
    : n_(n) {
  std::vector<std::size_t> order(vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return LexLess{}(vertices[a], vertices[b]); });
  std::vector<std::size_t> rank(vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (vertices[order[i]].size() != n) throw DimensionError("complex vertex of the wrong dimension");
    if (i > 0 && vertices[order[i]] == vertices_.back()) throw Error("complex has a repeated vertex");
    rank[order[i]] = i;
    vertices_.push_back(std::move(vertices[order[i]]));
  }
  for (auto& s : simplexes) {
    if (static_cast<int>(s.size()) != n + 1) throw Error("complex simplex must have n+1 vertices");
    for (auto& i : s) {
      if (i >= rank.size()) throw Error("complex simplex index out of range");
      i = rank[i];
    }
    std::sort(s.begin(), s.end());
  }
  std::sort(simplexes.begin(), simplexes.end());
  simplexes_ = std::move(simplexes);
  maps_.reserve(simplexes_.size());
  for (const auto& s : simplexes_) {
    MatrixQ m(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
      m.col(j).head(n) = vertices_[s[static_cast<std::size_t>(j)]];
      m(n, j) = 1;
    }
    auto inv = linalg::inverse(m);
    if (!inv) throw Error("complex has a degenerate simplex");
    maps_.push_back(std::move(*inv));
  }
}

std::optional<std::size_t> RegularComplex::find_vertex(const VectorQ& x) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x, LexLess{});
  if (it != vertices_.end() && *it == x) return static_cast<std::size_t>(it - vertices_.begin());
  return std::nullopt;
}

VectorQ RegularComplex::barycentric(std::size_t t, const VectorQ& x) const {
  if (x.size() != n_) throw DimensionError("point dimension differs from complex dimension");
  VectorQ xh(n_ + 1);
  xh.head(n_) = x;
  xh(n_) = 1;
  return maps_[t] * xh;
}

std::size_t RegularComplex::locate(const VectorQ& x) const {
  if (x.size() != n_) throw DimensionError("point dimension differs from complex dimension");
  for (std::size_t t = 0; t < simplexes_.size(); ++t) {
    const VectorQ b = barycentric(t, x);
    if ((b.array() >= Rational(0)).all()) return t;
  }
  throw Error("point " + point_to_string(x) + " lies outside the complex");
}

ComplexReport validate(const RegularComplex& c) {
  ComplexReport r;
  const int n = c.dimension();
  for (std::size_t t = 0; t < c.simplex_count(); ++t) {
    std::vector<VectorQ> vs;
    for (auto i : c.simplex(t)) vs.push_back(c.vertex(i));
    if (!is_regular_simplex(vs)) {
      r.regular = false;
      r.message = "simplex " + std::to_string(t) + " is not regular";
    }
    r.volume += simplex_volume(vs);
  }
  if (r.volume != 1) {
    r.covers = false;
    r.message = "simplex volumes sum to " + to_string(r.volume);
  }
  std::map<std::vector<std::size_t>, int> facets;
  for (const auto& s : c.simplexes()) {
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<std::size_t> f;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i != drop) f.push_back(s[i]);
      }
      ++facets[f];
    }
  }
  for (const auto& [f, count] : facets) {
    bool on_boundary = false;
    for (int k = 0; k < n && !on_boundary; ++k) {
      for (const Rational& side : {Rational(0), Rational(1)}) {
        if (std::all_of(f.begin(), f.end(), [&](std::size_t i) { return c.vertex(i)(k) == side; })) on_boundary = true;
      }
    }
    if (count > 2 || (count == 1 && !on_boundary)) {
      r.manifold = false;
      r.message = "facet shared by " + std::to_string(count) + " simplexes";
    }
  }
  return r;
}

RegularComplex kuhn_base(int n) {
  check_dimension(n);
  std::vector<VectorQ> vertices;
  for (int mask = 0; mask < (1 << n); ++mask) {
    VectorQ v(n);
    for (int k = 0; k < n; ++k) v(k) = (mask >> k) & 1;
    vertices.push_back(v);
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> simplexes;
  do {
    std::vector<std::size_t> s{0};
    std::size_t mask = 0;
    for (int k : perm) {
      mask |= std::size_t{1} << k;
      s.push_back(mask);
    }
    simplexes.push_back(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return RegularComplex(n, std::move(vertices), std::move(simplexes));
}

// ---------------------------------------------------------------------------
// Cell decomposition of a formula

namespace {

std::vector<const VectorQ*> cell_points(const Mesh& m, std::size_t c) {
  std::vector<const VectorQ*> pts;
  for (int v : m.cell(c)) pts.push_back(&m.points()[static_cast<std::size_t>(v)]);
  return pts;
}

std::vector<AffineForm> compute_essential(const Formula& f, int n) {
  Mesh m = Mesh::from(kuhn_base(n));
  const FormulaProgram prog({f});
  const auto vals = detail::decompose(m, prog);
  const auto root = static_cast<std::size_t>(prog.root_slot(0));
  std::vector<AffinePiece> pieces;
  for (std::size_t c = 0; c < m.cells().size(); ++c) {
    std::vector<Rational> y;
    for (int v : m.cell(c)) y.push_back(vals[static_cast<std::size_t>(v)][root]);
    pieces.push_back(detail::fit_piece(cell_points(m, c), y));
  }
  std::map<std::vector<int>, std::vector<std::size_t>> facets;
  for (std::size_t c = 0; c < m.cells().size(); ++c) {
    auto cell = m.cell(c);
    std::sort(cell.begin(), cell.end());
    for (std::size_t drop = 0; drop < cell.size(); ++drop) {
      std::vector<int> key;
      for (std::size_t i = 0; i < cell.size(); ++i) {
        if (i != drop) key.push_back(cell[i]);
      }
      facets[key].push_back(c);
    }
  }
  std::set<AffineForm, FormLess> out;
  for (const auto& [key, cs] : facets) {
    if (cs.size() != 2) continue;
    const AffinePiece& a = pieces[cs[0]];
    const AffinePiece& b = pieces[cs[1]];
    if (a == b) continue;
    VectorQ h(n + 1);
    h.head(n) = a.coefficients - b.coefficients;
    h(n) = a.constant - b.constant;
    AffineForm z = linalg::primitive_integer(h);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      if (z(i) != 0) {
        if (z(i) < 0) z = -z;
        break;
      }
    }
    out.insert(z);
  }
  return {out.begin(), out.end()};
}

struct EssentialCache {
  std::mutex mutex;
  // Keyed by node address; the stored formula keeps the node alive.
  std::map<std::pair<const Formula::Node*, int>, std::pair<Formula, std::vector<AffineForm>>> entries;
};

EssentialCache& essential_cache() {
  static EssentialCache cache;
  return cache;
}

}  // namespace

std::vector<AffineForm> essential_hyperplanes(const Formula& f, int n) {
  check_dimension(n);
  if (f.arity() > n) throw DimensionError("formula arity exceeds the dimension");
  auto& cache = essential_cache();
  const auto key = std::make_pair(f.id(), n);
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    if (auto it = cache.entries.find(key); it != cache.entries.end()) return it->second.second;
  }
  auto planes = compute_essential(f, n);
  std::lock_guard<std::mutex> lock(cache.mutex);
  if (cache.entries.size() > 4096) cache.entries.clear();
  cache.entries.emplace(key, std::make_pair(f, planes));
  return planes;
}

RegularComplex split_by_hyperplanes(const RegularComplex& c, const std::vector<AffineForm>& planes) {
  Mesh m = Mesh::from(c);
  std::size_t budget = limits().max_subdivisions;
  for (const auto& h : planes) {
    if (h.size() != c.dimension() + 1) throw DimensionError("hyperplane of the wrong dimension");
    detail::regular_split(m, h, budget);
  }
  return m.to_complex();
}

RegularComplex blow_up(const RegularComplex& c, const VectorQ& p) {
  if (p.size() != c.dimension()) throw DimensionError("point of the wrong dimension");
  if (!in_unit_cube(p)) throw Error("point outside the unit cube");
  if (c.find_vertex(p)) return c;
  Mesh m = Mesh::from(c);
  std::size_t budget = limits().max_subdivisions;
  detail::blow_up(m, p, budget);
  return m.to_complex();
}

namespace {

std::vector<AffineForm> essential_union(const std::vector<Formula>& phi, int n) {
  std::set<AffineForm, FormLess> all;
  for (const auto& f : phi) {
    for (auto& h : essential_hyperplanes(f, n)) all.insert(std::move(h));
  }
  return {all.begin(), all.end()};
}

}  // namespace

RegularComplex linearize(const std::vector<Formula>& phi, int n) {
  if (phi.empty()) throw Error("linearize: empty formula list");
  if (phi.size() > limits().max_formulas) {
    throw DimensionError("linearize: more than " + std::to_string(limits().max_formulas) + " formulas");
  }
  if (n == 0) {
    n = 1;
    for (const auto& f : phi) n = std::max(n, f.arity());
  }
  check_dimension(n);
  return split_by_hyperplanes(kuhn_base(n), essential_union(phi, n));
}

RegularComplex refine(const RegularComplex& c, const std::vector<Formula>& extra) {
  if (extra.empty()) return c;
  return split_by_hyperplanes(c, essential_union(extra, c.dimension()));
}

bool check_linear(const Formula& f, const RegularComplex& c) {
  if (f.arity() > c.dimension()) throw DimensionError("formula arity exceeds the complex dimension");
  Mesh m = Mesh::from(c);
  const FormulaProgram prog({f});
  const auto vals = detail::decompose(m, prog);
  const auto root = static_cast<std::size_t>(prog.root_slot(0));
  for (std::size_t cell = 0; cell < m.cells().size(); ++cell) {
    const auto t = static_cast<std::size_t>(m.origin(cell));
    const auto& s = c.simplex(t);
    for (int v : m.cell(cell)) {
      if (static_cast<std::size_t>(v) < c.vertex_count()) continue;
      const VectorQ b = c.barycentric(t, m.points()[static_cast<std::size_t>(v)]);
      Rational interp(0);
      for (std::size_t i = 0; i < s.size(); ++i) interp += b(static_cast<Eigen::Index>(i)) * vals[s[i]][root];
      if (interp != vals[static_cast<std::size_t>(v)][root]) return false;
    }
  }
  return true;
}

MatrixQ vertex_profile(const std::vector<Formula>& phi, const RegularComplex& c) {
  MatrixQ out(static_cast<Eigen::Index>(c.vertex_count()), static_cast<Eigen::Index>(phi.size()));
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (!check_linear(phi[j], c)) throw Error("complex does not linearize " + render(phi[j]));
  }
  const FormulaProgram prog(phi);
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    const auto vals = prog.run(c.vertex(v));
    for (std::size_t j = 0; j < phi.size(); ++j) {
      out(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)) = vals[static_cast<std::size_t>(prog.root_slot(j))];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// PL functions and hats

bool AffinePiece::is_integral() const {
  if (denominator_of(constant) != 1) return false;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    if (denominator_of(coefficients(i)) != 1) return false;
  }
  return true;
}

PLFunction::PLFunction(std::shared_ptr<const RegularComplex> complex, std::vector<Rational> values)
    : complex_(std::move(complex)), values_(std::move(values)) {
  if (values_.size() != complex_->vertex_count()) throw Error("PLFunction: one value per vertex required");
}

Rational PLFunction::operator()(const VectorQ& x) const {
  const std::size_t t = complex_->locate(x);
  const VectorQ b = complex_->barycentric(t, x);
  const auto& s = complex_->simplex(t);
  Rational out(0);
  for (std::size_t i = 0; i < s.size(); ++i) out += b(static_cast<Eigen::Index>(i)) * values_[s[i]];
  return out;
}

AffinePiece PLFunction::piece(std::size_t t) const {
  const int n = complex_->dimension();
  const auto& s = complex_->simplex(t);
  const MatrixQ& map = complex_->barycentric_map(t);
  VectorQ row = VectorQ::Zero(n + 1);
  for (std::size_t i = 0; i < s.size(); ++i) row += values_[s[i]] * map.row(static_cast<Eigen::Index>(i)).transpose();
  return AffinePiece{row.head(n), row(n)};
}

PLFunction interpolant(const Formula& f, std::shared_ptr<const RegularComplex> c) {
  const FormulaProgram prog({f});
  std::vector<Rational> values;
  values.reserve(c->vertex_count());
  for (const auto& v : c->vertices()) values.push_back(prog.run(v)[static_cast<std::size_t>(prog.root_slot(0))]);
  return PLFunction(std::move(c), std::move(values));
}

Rational SchauderHat::operator()(const RegularComplex& c, const VectorQ& x) const {
  return pieces[c.locate(x)](x);
}

std::vector<SchauderHat> hats(const RegularComplex& c) {
  const int n = c.dimension();
  std::vector<SchauderHat> out(c.vertex_count());
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    out[v].apex = v;
    out[v].pieces.assign(c.simplex_count(), AffinePiece{VectorQ::Zero(n), Rational(0)});
  }
  for (std::size_t t = 0; t < c.simplex_count(); ++t) {
    const auto& s = c.simplex(t);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto row = c.barycentric_map(t).row(static_cast<Eigen::Index>(i));
      AffinePiece p{row.head(n).transpose(), row(n)};
      if (!p.is_integral()) throw Error("hat piece with non-integer coefficients; the complex is not regular");
      out[s[i]].pieces[t] = std::move(p);
    }
  }
  return out;
}

}  // namespace luka
