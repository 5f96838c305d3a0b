#include "doctest.h"
#include "support.hpp"

#include "luka/coherence.hpp"

#include <set>

using namespace luka;
using luka::test::f;
using luka::test::pt;
using luka::test::q;

namespace {

std::vector<Formula> example_phi() { return {f("x1"), f("x2"), f("x1 + x2")}; }

Book example_book(const char* a, const char* b, const char* c) {
  const auto phi = example_phi();
  return Book({{phi[0], q(a)}, {phi[1], q(b)}, {phi[2], q(c)}});
}

std::set<std::string> strings(const std::vector<VectorQ>& pts) {
  std::set<std::string> out;
  for (const auto& p : pts) out.insert(point_to_string(p));
  return out;
}

// A convex combination of random profile rows, or a random point.
VectorQ random_beta(luka::test::Gen& gen, const MatrixQ& profile) {
  const int mode = gen.uniform(0, 3);
  const Eigen::Index k = profile.cols();
  if (mode == 0) return gen.point(static_cast<int>(k), 6);
  VectorQ beta = VectorQ::Zero(k);
  const int parts = mode == 1 ? 1 : gen.uniform(2, 4);
  std::vector<int> weights;
  int total = 0;
  for (int i = 0; i < parts; ++i) {
    weights.push_back(gen.uniform(1, 4));
    total += weights.back();
  }
  for (int i = 0; i < parts; ++i) {
    const auto r = static_cast<Eigen::Index>(gen.uniform(0, static_cast<int>(profile.rows()) - 1));
    beta += profile.row(r).transpose() * Rational(weights[static_cast<std::size_t>(i)], total);
  }
  return beta;
}

}  // namespace

TEST_CASE("book parsing") {
  const Book b = parse_book("# odds\nx1 ; 1/2\n  x1 + x2;3/4  # trailing\n\nx2 -> x1 ; 1\n");
  REQUIRE(b.size() == 3);
  CHECK(b.entries()[1].formula == f("x1 + x2"));
  CHECK(b.values()(1) == q("3/4"));
  CHECK(b.arity() == 2);
  CHECK_THROWS(parse_book("x1 ; 3/2"));
  CHECK_THROWS(parse_book("x1 3/2"));
  CHECK_THROWS(parse_book("x0 ; 1/2"));
  CHECK_THROWS(parse_book("# nothing"));
  CHECK_THROWS(Book({{f("x1"), q("-1/2")}}));
}

TEST_CASE("risk polytope of the worked example") {
  const auto phi = example_phi();
  const auto c = linearize(phi);
  const auto d = risk_polytope(phi, c);
  CHECK(strings(d.polytope.extremals()) ==
        strings({pt({"0", "0", "0"}), pt({"0", "1", "1"}), pt({"1", "0", "1"}), pt({"1", "1", "1"})}));
  CHECK(d.profile.rows() == 5);

  const auto seg = risk_polytope({f("x1")}, linearize({f("x1")}));
  CHECK(seg.polytope.dimension() == 1);
  CHECK(strings(seg.polytope.extremals()) == strings({pt({"0"}), pt({"1"})}));
  const auto anti = risk_polytope({f("x1"), f("~x1")}, linearize({f("x1"), f("~x1")}));
  CHECK(strings(anti.polytope.extremals()) == strings({pt({"0", "1"}), pt({"1", "0"})}));
}

TEST_CASE("decide_coherent") {
  const auto c = linearize(example_phi());
  auto v = decide_coherent(example_book("1/2", "1/2", "1"));
  CHECK(std::holds_alternative<Coherent>(v));
  CHECK(verify_certificate(v, example_book("1/2", "1/2", "1"), c));
  v = decide_coherent(example_book("1/2", "1/2", "3/4"));
  CHECK(std::holds_alternative<Coherent>(v));
  v = decide_coherent(example_book("1", "1", "1/2"));
  REQUIRE(std::holds_alternative<Incoherent>(v));
  CHECK(verify_certificate(v, example_book("1", "1", "1/2"), c));
  const MatrixQ profile = vertex_profile(example_phi(), c);
  const VectorQ bal = balances(profile, pt({"1", "1", "1/2"}), pt({"-1", "-1", "1"}));
  std::multiset<std::string> got;
  for (Eigen::Index i = 0; i < bal.size(); ++i) got.insert(to_string(bal(i)));
  CHECK(got == std::multiset<std::string>{"-3/2", "-3/2", "-3/2", "-3/2", "-1/2"});
}

TEST_CASE("trichotomy on the worked example") {
  const auto c = linearize(example_phi());
  const Book strict_book = example_book("1/2", "1/2", "3/4");
  const Book edge_book = example_book("1/2", "1/2", "1");
  const Book bad_book = example_book("1", "1", "1/2");

  const auto strict = decide_strict(strict_book);
  REQUIRE(std::holds_alternative<StrictlyCoherent>(strict));
  CHECK(verify_certificate(strict, strict_book, c));

  const auto edge = decide_strict(edge_book);
  REQUIRE(std::holds_alternative<CoherentNotStrict>(edge));
  CHECK(verify_certificate(edge, edge_book, c));
  const auto& cns = std::get<CoherentNotStrict>(edge);
  CHECK(verify_certificate(CoherentNotStrict{cns.weights, pt({"0", "0", "-1"})}, edge_book, c));
  CHECK_FALSE(verify_certificate(CoherentNotStrict{cns.weights, pt({"0", "0", "1"})}, edge_book, c));

  const auto bad = decide_strict(bad_book);
  REQUIRE(std::holds_alternative<Incoherent>(bad));
  CHECK(verify_certificate(bad, bad_book, c));
  CHECK(verify_certificate(Incoherent{pt({"-1", "-1", "1"})}, bad_book, c));
  CHECK_FALSE(verify_certificate(Incoherent{pt({"1", "1", "-1"})}, bad_book, c));

  // tampering
  auto tampered = std::get<StrictlyCoherent>(strict);
  tampered.weights(0) = 0;
  CHECK_FALSE(verify_certificate(tampered, strict_book, c));
  CHECK_FALSE(verify_certificate(strict, edge_book, c));
}

TEST_CASE("relative interior oracle on the worked example") {
  const auto phi = example_phi();
  const auto d = risk_polytope(phi, linearize(phi));
  CHECK(ri_membership_crosscheck(pt({"1/2", "1/2", "3/4"}), d));
  CHECK_FALSE(ri_membership_crosscheck(pt({"1/2", "1/2", "1"}), d));
  CHECK_FALSE(ri_membership_crosscheck(pt({"0", "0", "0"}), d));
}

TEST_CASE("strictness agrees with the relative-interior oracle") {
  luka::test::Gen gen(404);
  int counts[4] = {0, 0, 0, 0};
  int books = 0;
  for (int fixture = 0; fixture < 6; ++fixture) {
    const int n = gen.uniform(1, 3);
    const int k = gen.uniform(1, 3);
    std::vector<Formula> phi;
    for (int i = 0; i < k; ++i) phi.push_back(gen.formula(n, 2));
    const auto c = linearize(phi, n);
    const auto d = risk_polytope(phi, c);
    for (int b = 0; b < 40; ++b, ++books) {
      const VectorQ beta = random_beta(gen, d.profile);
      const auto v = decide_strict_on_profile(d.profile, beta);
      ++counts[v.index()];
      CHECK(verify_certificate_on_profile(v, d.profile, beta));
      CHECK(is_strict(v) == ri_membership_crosscheck(beta, d));
      CHECK(is_coherent(v) == d.polytope.contains(beta));
      CHECK(is_coherent(v) == is_coherent(decide_coherent_on_profile(d.profile, beta)));
    }
  }
  CHECK(books >= 200);
  CHECK(counts[0] > 0);
  CHECK(counts[2] > 0);
  CHECK(counts[3] > 0);
}

TEST_CASE("decisions do not depend on the linearizing complex") {
  luka::test::Gen gen(77);
  for (int fixture = 0; fixture < 4; ++fixture) {
    const int n = gen.uniform(1, 2);
    std::vector<Formula> phi{gen.formula(n, 2), gen.formula(n, 2)};
    const auto c = linearize(phi, n);
    const auto refined = refine(c, {gen.formula(n, 2)});
    const auto d0 = risk_polytope(phi, c);
    const auto d1 = risk_polytope(phi, refined);
    CHECK(strings(d0.polytope.extremals()) == strings(d1.polytope.extremals()));
    for (int b = 0; b < 10; ++b) {
      const VectorQ beta = random_beta(gen, d0.profile);
      const auto v0 = decide_strict_on_profile(d0.profile, beta);
      const auto v1 = decide_strict_on_profile(d1.profile, beta);
      CHECK(v0.index() == v1.index());
    }
  }
}

TEST_CASE("strict books restrict to strict books, sure losses are uniform") {
  luka::test::Gen gen(5150);
  const auto phi = example_phi();
  const auto c = linearize(phi);
  const MatrixQ profile = vertex_profile(phi, c);
  for (int b = 0; b < 60; ++b) {
    const VectorQ beta = random_beta(gen, profile);
    const auto v = decide_strict_on_profile(profile, beta);
    if (is_strict(v)) {
      for (int drop = 0; drop < 3; ++drop) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < 3; ++i) {
          if (i != drop) keep.push_back(i);
        }
        MatrixQ sub(profile.rows(), 2);
        VectorQ sb(2);
        for (std::size_t j = 0; j < keep.size(); ++j) {
          sub.col(static_cast<Eigen::Index>(j)) = profile.col(keep[j]);
          sb(static_cast<Eigen::Index>(j)) = beta(keep[j]);
        }
        CHECK(is_strict(decide_strict_on_profile(sub, sb)));
      }
    }
    if (const auto* inc = std::get_if<Incoherent>(&v)) {
      for (int s = 0; s < 100; ++s) {
        const VectorQ x = gen.point(2, 20);
        Rational bal(0);
        for (int i = 0; i < 3; ++i) bal += inc->stakes(i) * (beta(i) - eval(phi[static_cast<std::size_t>(i)], x));
        CHECK(bal < 0);
      }
    }
  }
}
