#include "luka/geometry.hpp"

#include "luka/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace luka {

VectorZ homogeneous_correspondent(const VectorQ& x) {
  const Integer den = common_denominator(x);
  VectorZ h(x.size() + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    h(i) = numerator_of(x(i)) * (den / denominator_of(x(i)));
  }
  h(x.size()) = den;
  return h;
}

VectorQ dehomogenize(const VectorZ& h) {
  const Eigen::Index k = h.size() - 1;
  if (k < 0 || h(k) == 0) throw Error("dehomogenize: last entry must be nonzero");
  VectorQ x(k);
  for (Eigen::Index i = 0; i < k; ++i) x(i) = Rational(h(i), h(k));
  return x;
}

namespace {

MatrixQ differences(const std::vector<VectorQ>& pts) {
  const auto n = pts.front().size();
  MatrixQ d(static_cast<Eigen::Index>(pts.size()) - 1, n);
  for (std::size_t i = 1; i < pts.size(); ++i) d.row(static_cast<Eigen::Index>(i) - 1) = (pts[i] - pts[0]).transpose();
  return d;
}

Integer factorial(int m) {
  Integer f(1);
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

Simplex::Simplex(std::vector<VectorQ> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error("simplex needs at least one vertex");
  const auto n = vertices_.front().size();
  for (const auto& v : vertices_) {
    if (v.size() != n) throw DimensionError("simplex vertices of different dimensions");
  }
  if (linalg::rank(differences(vertices_)) != static_cast<Eigen::Index>(vertices_.size()) - 1) {
    throw Error("simplex vertices are affinely dependent");
  }
}

bool is_regular_simplex(const std::vector<VectorQ>& vertices) {
  if (vertices.empty()) return false;
  const Eigen::Index n = vertices.front().size();
  MatrixZ m(static_cast<Eigen::Index>(vertices.size()), n + 1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = homogeneous_correspondent(vertices[i]).transpose();
  }
  return linalg::gcd_of_maximal_minors(m) == 1;
}

bool is_regular_simplex(const Simplex& s) { return is_regular_simplex(s.vertices()); }

Rational simplex_volume(const std::vector<VectorQ>& vertices) {
  if (vertices.empty()) return Rational(0);
  const Eigen::Index n = vertices.front().size();
  if (static_cast<Eigen::Index>(vertices.size()) != n + 1) return Rational(0);
  if (n == 0) return Rational(1);
  const Rational det = linalg::determinant(differences(vertices));
  return abs(det) / Rational(factorial(static_cast<int>(n)));
}

Rational simplex_volume(const Simplex& s) { return simplex_volume(s.vertices()); }

// ---------------------------------------------------------------------------
// Polytopes

bool Polytope::in_affine_hull(const VectorQ& x) const {
  if (x.size() != base_.size()) throw DimensionError("point dimension differs from polytope");
  if (equations_.rows() == 0) return true;
  return equations_ * x == rhs_;
}

bool Polytope::contains(const VectorQ& x) const {
  if (!in_affine_hull(x)) return false;
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return f.normal.dot(x) <= f.offset; });
}

bool Polytope::in_relative_interior(const VectorQ& x) const {
  if (!in_affine_hull(x)) return false;
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return f.normal.dot(x) < f.offset; });
}

namespace {

struct Plane {
  VectorQ normal;  // in chart coordinates
  Rational offset;
};

// Hyperplane through d affinely independent points of Q^d, oriented so that
// `inside` lies strictly below it.
Plane plane_through(const std::vector<const VectorQ*>& pts, const VectorQ& inside) {
  const Eigen::Index d = pts.front()->size();
  MatrixQ m(static_cast<Eigen::Index>(pts.size()) - 1, d);
  for (std::size_t i = 1; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i) - 1) = (*pts[i] - *pts[0]).transpose();
  const MatrixQ ns = linalg::nullspace(m);
  if (ns.cols() != 1) throw Error("convex_hull: degenerate facet");
  VectorQ normal = ns.col(0);
  const VectorZ prim = linalg::primitive_integer(normal);
  for (Eigen::Index i = 0; i < d; ++i) normal(i) = Rational(prim(i));
  Rational offset = normal.dot(*pts[0]);
  if (normal.dot(inside) > offset) {
    normal = -normal;
    offset = -offset;
  }
  return {normal, offset};
}

struct SimplicialFacet {
  std::vector<std::size_t> verts;  // sorted
  Plane plane;
};

}  // namespace

Polytope convex_hull(const std::vector<VectorQ>& points) {
  if (points.empty()) throw Error("convex_hull: empty point list");
  const Eigen::Index k = points.front().size();
  for (const auto& p : points) {
    if (p.size() != k) throw DimensionError("convex_hull: mixed dimensions");
  }
  Polytope poly;
  poly.generators_ = points;
  poly.base_ = points.front();

  // Distinct points, in order of first occurrence.
  std::vector<VectorQ> pts;
  std::vector<std::size_t> first_index;
  {
    std::map<VectorQ, std::size_t, LexLess> seen;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (seen.emplace(points[i], pts.size()).second) {
        pts.push_back(points[i]);
        first_index.push_back(i);
      }
    }
  }

  MatrixQ diff(static_cast<Eigen::Index>(pts.size()) - 1, k);
  for (std::size_t i = 1; i < pts.size(); ++i) diff.row(static_cast<Eigen::Index>(i) - 1) = (pts[i] - pts[0]).transpose();
  MatrixQ reduced = diff;
  const auto chart = linalg::row_reduce(reduced);
  const int d = static_cast<int>(chart.size());
  poly.dimension_ = d;
  poly.chart_ = chart;
  {
    const MatrixQ ns = linalg::nullspace(diff);
    poly.equations_ = ns.transpose();
    poly.rhs_ = poly.equations_ * pts[0];
  }

  if (d == 0) {
    poly.extremals_ = {pts[0]};
    poly.extremal_generators_ = {0};
    return poly;
  }

  std::vector<VectorQ> q(pts.size(), VectorQ(d));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < d; ++j) q[i](j) = pts[i](chart[static_cast<std::size_t>(j)]);
  }

  // Initial simplex: point 0 and d points independent from it.
  std::vector<std::size_t> initial{0};
  {
    MatrixQ qd(static_cast<Eigen::Index>(q.size()) - 1, d);
    for (std::size_t i = 1; i < q.size(); ++i) qd.row(static_cast<Eigen::Index>(i) - 1) = (q[i] - q[0]).transpose();
    for (auto r : linalg::independent_rows(qd)) initial.push_back(static_cast<std::size_t>(r) + 1);
  }
  VectorQ centroid = VectorQ::Zero(d);
  for (auto i : initial) centroid += q[i];
  centroid /= Rational(static_cast<int>(initial.size()));

  std::vector<SimplicialFacet> hull;
  auto make_facet = [&](std::vector<std::size_t> verts) {
    std::sort(verts.begin(), verts.end());
    std::vector<const VectorQ*> vp;
    for (auto v : verts) vp.push_back(&q[v]);
    return SimplicialFacet{verts, plane_through(vp, centroid)};
  };
  for (std::size_t skip = 0; skip < initial.size(); ++skip) {
    std::vector<std::size_t> verts;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      if (i != skip) verts.push_back(initial[i]);
    }
    hull.push_back(make_facet(verts));
  }

  std::set<std::size_t> in_initial(initial.begin(), initial.end());
  for (std::size_t p = 0; p < q.size(); ++p) {
    if (in_initial.count(p) != 0) continue;
    std::vector<bool> visible(hull.size(), false);
    bool any = false;
    for (std::size_t f = 0; f < hull.size(); ++f) {
      if (hull[f].plane.normal.dot(q[p]) > hull[f].plane.offset) {
        visible[f] = true;
        any = true;
      }
    }
    if (!any) continue;
    std::map<std::vector<std::size_t>, int> ridge_count;
    for (std::size_t f = 0; f < hull.size(); ++f) {
      if (!visible[f]) continue;
      const auto& vs = hull[f].verts;
      for (std::size_t drop = 0; drop < vs.size(); ++drop) {
        std::vector<std::size_t> ridge;
        for (std::size_t i = 0; i < vs.size(); ++i) {
          if (i != drop) ridge.push_back(vs[i]);
        }
        ++ridge_count[ridge];
      }
    }
    std::vector<SimplicialFacet> next;
    for (std::size_t f = 0; f < hull.size(); ++f) {
      if (!visible[f]) next.push_back(std::move(hull[f]));
    }
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      auto verts = ridge;
      verts.push_back(p);
      next.push_back(make_facet(verts));
    }
    hull = std::move(next);
  }

  // Merge coplanar simplicial facets.
  std::vector<Plane> planes;
  {
    std::set<std::vector<Rational>> seen;
    for (const auto& f : hull) {
      std::vector<Rational> key(f.plane.normal.data(), f.plane.normal.data() + d);
      key.push_back(f.plane.offset);
      if (seen.insert(key).second) planes.push_back(f.plane);
    }
  }

  // Extremal points: the tight facet normals span Q^d.
  std::vector<std::size_t> extremal_local;
  for (std::size_t p = 0; p < q.size(); ++p) {
    std::vector<VectorQ> tight;
    for (const auto& pl : planes) {
      if (pl.normal.dot(q[p]) == pl.offset) tight.push_back(pl.normal);
    }
    if (static_cast<int>(tight.size()) < d) continue;
    MatrixQ nm(static_cast<Eigen::Index>(tight.size()), d);
    for (std::size_t i = 0; i < tight.size(); ++i) nm.row(static_cast<Eigen::Index>(i)) = tight[i].transpose();
    if (linalg::rank(nm) == d) extremal_local.push_back(p);
  }
  for (auto p : extremal_local) {
    poly.extremals_.push_back(pts[p]);
    poly.extremal_generators_.push_back(first_index[p]);
  }

  for (const auto& pl : planes) {
    Facet f;
    f.normal = VectorQ::Zero(k);
    for (int j = 0; j < d; ++j) f.normal(chart[static_cast<std::size_t>(j)]) = pl.normal(j);
    f.offset = pl.offset;
    for (std::size_t e = 0; e < extremal_local.size(); ++e) {
      if (pl.normal.dot(q[extremal_local[e]]) == pl.offset) f.vertices.push_back(e);
    }
    poly.facets_.push_back(std::move(f));
  }
  std::sort(poly.facets_.begin(), poly.facets_.end(),
            [](const Facet& a, const Facet& b) { return a.vertices < b.vertices; });
  return poly;
}

std::vector<std::vector<std::size_t>> face_index_sets(const Polytope& p) {
  std::set<std::vector<std::size_t>> all;
  std::vector<std::vector<std::size_t>> frontier;
  for (const auto& f : p.facets()) {
    if (all.insert(f.vertices).second) frontier.push_back(f.vertices);
  }
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& a : frontier) {
      for (const auto& f : p.facets()) {
        std::vector<std::size_t> meet;
        std::set_intersection(a.begin(), a.end(), f.vertices.begin(), f.vertices.end(), std::back_inserter(meet));
        if (meet.empty()) continue;
        if (all.insert(meet).second) next.push_back(meet);
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<std::size_t>> out(all.begin(), all.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

std::vector<Polytope> faces(const Polytope& p) {
  std::vector<Polytope> out;
  for (const auto& idx : face_index_sets(p)) {
    std::vector<VectorQ> pts;
    for (auto i : idx) pts.push_back(p.extremals()[i]);
    out.push_back(convex_hull(pts));
  }
  return out;
}

}  // namespace luka
