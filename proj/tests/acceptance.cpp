// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include "luka/coherence.hpp"
#include "luka/json_io.hpp"
#include "luka/logic.hpp"
#include "luka/states.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace luka;
using luka::test::f;
using luka::test::Gen;
using luka::test::pt;
using luka::test::q;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failed expectation.
class Expect {
 public:
  void operator()(bool cond, const std::string& what) {
    ++checks_;
    if (!cond && ok_) {
      ok_ = false;
      first_ = what;
    }
  }
  Outcome done(const std::string& summary) const {
    if (ok_) return {true, summary + ", " + std::to_string(checks_) + " checks"};
    return {false, "failed: " + first_};
  }

 private:
  bool ok_ = true;
  int checks_ = 0;
  std::string first_;
};

std::set<std::string> point_set(const std::vector<VectorQ>& pts) {
  std::set<std::string> out;
  for (const auto& p : pts) out.insert(point_to_string(p));
  return out;
}

std::vector<VectorQ> rows_of(const MatrixQ& m) {
  std::vector<VectorQ> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(m.row(r).transpose());
  return out;
}

Book book_of(const std::vector<Formula>& phi, const VectorQ& beta) {
  std::vector<BookEntry> entries;
  for (std::size_t i = 0; i < phi.size(); ++i) entries.push_back({phi[i], beta(static_cast<Eigen::Index>(i))});
  return Book(entries);
}

std::vector<Formula> example_phi() { return {f("x1"), f("x2"), f("x1 + x2")}; }

Polytope hull(std::initializer_list<VectorQ> pts) { return convex_hull(std::vector<VectorQ>(pts)); }

std::vector<Polytope> facet_polytopes(const Polytope& d) {
  std::vector<Polytope> out;
  for (const auto& fc : d.facets()) {
    std::vector<VectorQ> pts;
    for (auto i : fc.vertices) pts.push_back(d.extremals()[i]);
    out.push_back(convex_hull(pts));
  }
  return out;
}

// Random book: a random point, a single profile row or a short convex
// combination of rows.
VectorQ random_book(Gen& gen, const MatrixQ& profile, int b) {
  const auto k = static_cast<int>(profile.cols());
  const int rows = static_cast<int>(profile.rows());
  if (b % 4 == 0) return gen.point(k, 6);
  if (b % 4 == 1) return profile.row(gen.uniform(0, rows - 1)).transpose();
  VectorQ beta = VectorQ::Zero(k);
  const int parts = gen.uniform(2, 3);
  for (int i = 0; i < parts; ++i) beta += profile.row(gen.uniform(0, rows - 1)).transpose() / Rational(parts);
  return beta;
}

AffineForm form(std::initializer_list<int> entries) {
  AffineForm l(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (int e : entries) l(i++) = e;
  return l;
}

Outcome criterion1() {
  Expect ex;
  const auto t0 = Clock::now();
  const auto c = linearize(example_phi());
  const auto d = risk_polytope(example_phi(), c);
  const double took = seconds_since(t0);
  ex(c.find_vertex(pt({"1/2", "1/2"})).has_value(), "(1/2,1/2) is a vertex");
  ex(c.vertex_count() == 5, "five vertices");
  ex(point_set(rows_of(d.profile)) ==
         point_set({pt({"0", "0", "0"}), pt({"0", "1", "1"}), pt({"1", "0", "1"}), pt({"1", "1", "1"}),
                    pt({"1/2", "1/2", "1"})}),
     "profile p1..p5");
  ex(point_set(d.polytope.extremals()) ==
         point_set({pt({"0", "0", "0"}), pt({"0", "1", "1"}), pt({"1", "0", "1"}), pt({"1", "1", "1"})}),
     "extremals p1..p4");
  ex(d.polytope.dimension() == 3, "D is a tetrahedron");
  ex(took < 1.0, "under one second");
  std::ostringstream s;
  s << "profile and extremals in " << took << " s";
  return ex.done(s.str());
}

struct Fixture {
  std::vector<Formula> phi;
  VectorQ beta;
};

std::vector<Fixture> fixture_books() {
  return {
      {{f("x1")}, pt({"1/2"})},
      {{f("x1")}, pt({"1"})},
      {example_phi(), pt({"1/2", "1/2", "3/4"})},
      {example_phi(), pt({"1/2", "1/2", "1"})},
      {example_phi(), pt({"1", "1", "1/2"})},
      {{f("x1 & x2"), f("x1 -> x2")}, pt({"1/3", "2/3"})},
      {{f("x1 + x1"), f("x1 * x1")}, pt({"3/4", "1/4"})},
      {{f("x1"), f("~x1")}, pt({"1/2", "1/2"})},
      {{f("x1 | x2"), f("x1 * x2")}, pt({"1", "0"})},
      {{f("x1 -> x2"), f("x2 -> x1"), f("x1 & ~x2")}, pt({"1", "1/2", "1/3"})},
  };
}

Outcome criterion2() {
  Expect ex;
  Gen gen(202);
  int refinements = 0;
  for (const auto& fx : fixture_books()) {
    const Book book = book_of(fx.phi, fx.beta);
    const auto base = linearize(fx.phi);
    const int n = base.dimension();
    const auto extremals = point_set(risk_polytope(fx.phi, base).polytope.extremals());
    const auto verdict = decide_strict(book, base);
    ex(verify_certificate(verdict, book, base), "base certificate");
    for (int r = 0; r < 3; ++r, ++refinements) {
      RegularComplex fine;
      if (r == 0) {
        fine = refine(base, {gen.formula(n, 2), gen.formula(n, 2)});
      } else if (r == 1) {
        AffineForm h(n + 1);
        for (int j = 0; j <= n; ++j) h(j) = gen.uniform(-3, 3);
        h(0) = gen.uniform(1, 3);
        fine = split_by_hyperplanes(base, {h});
      } else {
        fine = blow_up(base, gen.point(n, 7));
      }
      ex(validate(fine).ok(), "refinement is a regular triangulation");
      ex(point_set(risk_polytope(fx.phi, fine).polytope.extremals()) == extremals, "extremals unchanged");
      const auto v = decide_strict(book, fine);
      ex(std::string(verdict_name(v)) == verdict_name(verdict) && v.index() == verdict.index(), "verdict unchanged");
      ex(verify_certificate(v, book, fine), "refined certificate");
    }
  }
  return ex.done("10 books x 3 refinements (" + std::to_string(refinements) + ")");
}

Outcome criterion3() {
  Expect ex;
  const auto c = linearize(example_phi());
  const Book strict = book_of(example_phi(), pt({"1/2", "1/2", "3/4"}));
  const Book edge = book_of(example_phi(), pt({"1/2", "1/2", "1"}));
  const Book bad = book_of(example_phi(), pt({"1", "1", "1/2"}));

  const auto vs = decide_strict(strict, c);
  ex(std::holds_alternative<StrictlyCoherent>(vs), "strict book is strictly coherent");
  if (const auto* s = std::get_if<StrictlyCoherent>(&vs)) {
    bool positive = true;
    for (Eigen::Index i = 0; i < s->weights.size(); ++i) positive = positive && s->weights(i) > 0;
    ex(positive, "faithful weights");
  }
  ex(verify_certificate(vs, strict, c), "strict certificate");

  const auto ve = decide_strict(edge, c);
  ex(std::holds_alternative<CoherentNotStrict>(ve), "edge book is coherent, not strict");
  if (const auto* s = std::get_if<CoherentNotStrict>(&ve)) ex(s->stakes == pt({"0", "0", "-1"}), "edge stakes (0,0,-1)");
  ex(verify_certificate(ve, edge, c), "edge certificate");

  const auto vb = decide_strict(bad, c);
  ex(std::holds_alternative<Incoherent>(vb), "bad book is incoherent");
  if (const auto* s = std::get_if<Incoherent>(&vb)) {
    ex(s->stakes.size() == 3 && s->stakes(0) < 0 && s->stakes(1) < 0 && s->stakes(2) > 0, "bad stakes (-,-,+)");
    const VectorQ bal = balances(vertex_profile(example_phi(), c), bad.values(), s->stakes);
    bool negative = true;
    for (Eigen::Index i = 0; i < bal.size(); ++i) negative = negative && bal(i) < 0;
    ex(negative, "every balance negative");
  }
  ex(verify_certificate(vb, bad, c), "bad certificate");
  return ex.done("strict, edge and incoherent books");
}

Outcome criterion4() {
  Expect ex;
  Gen gen(404);
  const auto t0 = Clock::now();
  int books = 0;
  int fixtures = 0;
  int strict_count = 0;
  while (fixtures < 5) {
    const int n = 1 + fixtures % 3;
    const int k = 1 + gen.uniform(0, 2);
    std::vector<Formula> phi;
    for (int i = 0; i < k; ++i) phi.push_back(gen.formula(n, n == 3 ? 2 : 3));
    const auto c = linearize(phi);
    const auto d = risk_polytope(phi, c);
    if (d.polytope.dimension() == 0) continue;
    ++fixtures;
    for (int b = 0; b < 44; ++b, ++books) {
      const VectorQ beta = random_book(gen, d.profile, b);
      const Book book = book_of(phi, beta);
      const auto v = decide_strict(book, c);
      ex(is_strict(v) == ri_membership_crosscheck(beta, d), "LP strictness agrees with relative interior");
      ex(is_coherent(v) == d.polytope.contains(beta), "LP coherence agrees with membership");
      if (is_strict(v)) ++strict_count;
    }
  }
  const double took = seconds_since(t0);
  ex(books >= 200, "at least 200 books");
  ex(strict_count > 0 && strict_count < books, "both outcomes occur");
  ex(took < 60.0, "under 60 seconds");
  std::ostringstream s;
  s << books << " books over " << fixtures << " event lists, " << strict_count << " strict, " << took << " s";
  return ex.done(s.str());
}

Outcome criterion5() {
  Expect ex;
  Gen gen(505);
  const std::vector<std::vector<Formula>> lists{
      example_phi(),
      {f("x1 & x2"), f("x1 -> x2")},
      {f("x1 + x1"), f("x1 * x1")},
      {f("x1 + x2 * x3"), f("x3 -> x1")},
  };
  int points = 0;
  for (const auto& phi : lists) {
    const auto c = linearize(phi);
    const int n = c.dimension();
    const auto hs = hats(c);
    std::vector<std::vector<Rational>> at_vertices;
    for (const auto& g : phi) at_vertices.push_back(restrict(g, c));
    for (int s = 0; s < 50; ++s, ++points) {
      const VectorQ x = gen.point(n, 9);
      std::vector<Rational> h;
      Rational sum = 0;
      for (const auto& hat : hs) {
        h.push_back(hat(c, x));
        sum += h.back();
      }
      ex(sum == 1, "hats sum to one");
      for (std::size_t u = 0; u < h.size(); ++u) {
        for (std::size_t v = u + 1; v < h.size(); ++v) ex(h[u] + h[v] <= 1, "hats are pairwise disjoint");
      }
      for (std::size_t i = 0; i < phi.size(); ++i) {
        Rational combo = 0;
        for (std::size_t v = 0; v < h.size(); ++v) combo += at_vertices[i][v] * h[v];
        ex(combo == eval(phi[i], x), "interpolation");
      }
    }
    for (std::size_t v = 0; v < hs.size(); ++v) {
      for (std::size_t w = 0; w < hs.size(); ++w) ex(hs[v](c, c.vertex(w)) == (v == w ? 1 : 0), "hat at vertices");
    }
  }
  return ex.done(std::to_string(lists.size()) + " complexes, " + std::to_string(points) + " points");
}

bool is_constant(const Formula& g, int n) {
  const auto c = linearize({g}, n);
  const auto values = restrict(g, c);
  for (const auto& v : values) {
    if (v != values.front()) return false;
  }
  return true;
}

Outcome criterion6() {
  Expect ex;
  auto s = ExtensionSession::open(Book({{f("x1"), q("1/2")}}));
  const std::vector<Formula> chain{f("x1 + x1"), f("x1 * x1"), f("x1 -> x1 * x1"), f("~x1 & (x1 + x1)"),
                                   f("x1 + x1 + x1")};
  for (const auto& g : chain) {
    const Rational v = s.extend(g);
    ex(s.state().faithful(), "state stays faithful");
    if (!is_constant(g, 1)) ex(v > 0 && v < 1, "value strictly inside (0,1)");
    for (const auto& [h, value] : s.history()) ex(s.eval(h) == value, "earlier values preserved");
    ex(s.eval(f("x1")) == q("1/2"), "book value preserved");
  }
  ex(s.history().size() == 5, "five steps");
  const Json doc = session_to_json(s);
  const auto back = session_from_json(doc);
  ex(back.complex() == s.complex(), "complex round trip");
  ex(back.state().weights() == s.state().weights(), "weights round trip");
  ex(back.history().size() == s.history().size(), "history round trip");
  ex(session_to_json(back).dump() == doc.dump(), "document round trip");
  std::string values;
  for (const auto& [h, value] : s.history()) values += (values.empty() ? "" : " ") + to_string(value);
  return ex.done("values " + values);
}

Outcome criterion7() {
  Expect ex;
  ex(lebesgue_state(f("x1")) == q("1/2"), "x1");
  ex(lebesgue_state(f("x1 + x1")) == q("3/4"), "x1 + x1");
  ex(lebesgue_state(f("x1 + x2")) == q("5/6"), "x1 + x2");
  Gen gen(707);
  int positives = 0;
  for (int i = 0; i < 400 && positives < 50; ++i) {
    const int n = gen.uniform(1, 2);
    const Formula a = gen.formula(n, 3);
    const auto c = linearize({a}, n);
    bool nonzero = false;
    for (const auto& v : restrict(a, c)) nonzero = nonzero || v > 0;
    const Rational l = lebesgue_state(a, n);
    ex((l > 0) == nonzero, "positive exactly on nonzero formulas");
    if (nonzero) ++positives;
  }
  ex(positives >= 50, "50 nonzero formulas");
  return ex.done("1/2, 3/4, 5/6 and " + std::to_string(positives) + " positive");
}

Outcome criterion8() {
  Expect ex;
  Gen gen(808);
  const std::vector<std::vector<Formula>> lists{
      {f("x1")},
      {f("x1"), f("~x1")},
      {f("x1 + x1"), f("x1 * x1")},
      example_phi(),
      {f("x1 & x2"), f("x1 -> x2")},
  };
  int books = 0;
  for (const auto& phi : lists) {
    const CoherenceTheory theory(phi);
    const auto c = linearize(phi);
    const MatrixQ profile = theory.risk().profile;
    for (int b = 0; b < 24; ++b, ++books) {
      const VectorQ beta = random_book(gen, profile, b);
      const auto lv = logic_coherence_check(theory, beta);
      const auto v = decide_strict(book_of(phi, beta), c);
      ex(lv.coherent == is_coherent(v), "coherence agrees");
      ex(lv.strict == is_strict(v), "strictness agrees");
    }
  }
  ex(books >= 100, "at least 100 books");
  ex(deduction_exponent(f("~x1"), f("~(x1 + x1)")) == 2, "exponent 2");
  ex(!is_valid(f("~x1 -> ~(x1 + x1)"), 1), "exponent 1 invalid");
  ex(is_valid(f("(~x1 * ~x1) -> ~(x1 + x1)"), 1), "exponent 2 valid");
  return ex.done(std::to_string(books) + " books, exponent 2");
}

Outcome criterion9() {
  Expect ex;
  int formulas = 0;
  const std::vector<Polytope> shapes{
      hull({pt({"1/2"})}),
      hull({pt({"1/3"}), pt({"3/4"})}),
      hull({pt({"0", "0"}), pt({"1", "1/2"})}),
      hull({pt({"1/2", "0"}), pt({"1", "1/3"}), pt({"1/3", "1"})}),
      hull({pt({"1/2", "1/2", "3/4"})}),
      hull({pt({"0", "0", "0"}), pt({"0", "1", "1"}), pt({"1", "0", "1"}), pt({"1", "1", "1"})}),
  };
  for (const auto& p : shapes) {
    ex(oneset_equals(synth_polytope_formula(p), {p}, p.ambient_dimension()), "polytope formula");
    ++formulas;
    if (p.dimension() > 0) {
      ex(oneset_equals(synth_boundary_formula(p), facet_polytopes(p), p.ambient_dimension()), "boundary formula");
      ++formulas;
    }
  }
  for (const auto& phi : {example_phi(), std::vector<Formula>{f("x1"), f("~x1")}}) {
    const CoherenceTheory theory(phi);
    const int k = theory.dimension();
    ex(oneset_equals(theory.polytope_formula(), {theory.risk().polytope}, k), "theory polytope formula");
    ex(oneset_equals(theory.boundary_formula(), facet_polytopes(theory.risk().polytope), k), "theory boundary formula");
    formulas += 2;
  }
  const CoherenceTheory theory(example_phi());
  for (const auto& beta : {pt({"1/2", "1/2", "3/4"}), pt({"1/6", "1/6", "1/3"})}) {
    ex(oneset_equals(logic_coherence_check(theory, beta).pi_beta, {convex_hull({beta})}, 3), "point formula");
    ++formulas;
  }
  const auto d = linearize(example_phi());
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  const auto hs = synth_hat_formulas(d, all);
  for (std::size_t v = 0; v < hs.size(); ++v) {
    ex(oneset_equals(hs[v], {convex_hull({d.vertex(v)})}, 2), "hat formula");
    ++formulas;
  }
  int terms = 0;
  for (int a = -3; a <= 3; ++a) {
    for (int c = -3; c <= 3; ++c) {
      ex(verify_affine_term(synth_affine_term(form({a, c})), form({a, c})), "affine term in one variable");
      ++terms;
      for (int b = -3; b <= 3; ++b) {
        const AffineForm l = form({a, b, c});
        ex(verify_affine_term(synth_affine_term(l), l), "affine term in two variables");
        ++terms;
      }
    }
  }
  return ex.done(std::to_string(formulas) + " onesets, " + std::to_string(terms) + " affine terms");
}

// Classical answers for a 0/1 book: coherent iff some Boolean valuation
// realizes it, strict iff every valuation does.
Outcome criterion10() {
  Expect ex;
  const std::vector<Formula> pool{
      f("x1"),           f("x2"),          f("~x1"),         f("x1 & x2"),          f("x1 | x2"),
      f("x1 & ~x2"),     f("~x1 | x2"),    f("x1 | ~x1"),    f("x1 & ~x1"),
      f("(x1 & ~x2) | (~x1 & x2)"),
  };
  std::vector<VectorQ> valuations;
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) valuations.push_back(make_vector(std::vector<Rational>{Rational(a), Rational(b)}));
  }
  std::vector<std::vector<Formula>> lists;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    lists.push_back({pool[i]});
    for (std::size_t j = i + 1; j < pool.size(); ++j) lists.push_back({pool[i], pool[j]});
  }
  int cases = 0;
  for (const auto& phi : lists) {
    const auto k = static_cast<Eigen::Index>(phi.size());
    MatrixQ boolean_profile(static_cast<Eigen::Index>(valuations.size()), k);
    for (std::size_t w = 0; w < valuations.size(); ++w) {
      for (Eigen::Index i = 0; i < k; ++i) boolean_profile(static_cast<Eigen::Index>(w), i) = eval(phi[static_cast<std::size_t>(i)], valuations[w]);
    }
    for (int mask = 0; mask < (1 << k); ++mask, ++cases) {
      VectorQ beta(k);
      for (Eigen::Index i = 0; i < k; ++i) beta(i) = (mask >> i) & 1;
      int realized = 0;
      for (Eigen::Index w = 0; w < boolean_profile.rows(); ++w) {
        if (boolean_profile.row(w).transpose() == beta) ++realized;
      }
      const bool classical_coherent = realized > 0;
      const bool classical_strict = realized == boolean_profile.rows();
      const Book book = book_of(phi, beta);
      ex(is_coherent(decide_coherent(book, linearize(phi, 2))) == classical_coherent, "coherence on the cube");
      const auto v = decide_strict_on_profile(boolean_profile, beta);
      ex(is_coherent(v) == classical_coherent, "coherence on Boolean valuations");
      ex(is_strict(v) == classical_strict, "strictness on Boolean valuations");
      ex(verify_certificate_on_profile(v, boolean_profile, beta), "Boolean certificate");
    }
  }
  return ex.done(std::to_string(lists.size()) + " event lists, " + std::to_string(cases) + " books");
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::ostringstream took;
    took.precision(3);
    took << seconds_since(t0);
    std::cout << "criterion " << (i + 1) << ": " << (o.ok ? "PASS" : "FAIL") << " (" << o.detail << "; " << took.str()
              << " s)" << std::endl;
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
