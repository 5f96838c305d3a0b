#include "doctest.h"
#include "support.hpp"

#include "luka/json_io.hpp"

using namespace luka;
using luka::test::f;
using luka::test::pt;
using luka::test::q;

namespace {

Book half_book() { return Book({{f("x1"), q("1/2")}}); }

}  // namespace

TEST_CASE("rationals and points") {
  CHECK(rational_to_json(q("-3/4")) == "-3/4");
  CHECK(rational_to_json(Rational(2)) == "2");
  CHECK(rational_from_json(Json("6/8")) == q("3/4"));
  CHECK(rational_from_json(Json(1)) == 1);
  CHECK_THROWS(rational_from_json(Json(0.5)));
  CHECK(point_from_json(point_to_json(pt({"1/3", "0", "1"}))) == pt({"1/3", "0", "1"}));
}

TEST_CASE("complex round trip") {
  const RegularComplex c = linearize({f("x1 + x2"), f("x1 & ~x2")});
  const Json j = complex_to_json(c);
  CHECK(j["n"] == 2);
  CHECK(j["vertices"].size() == c.vertex_count());
  CHECK(complex_from_json(j) == c);
  CHECK(complex_from_json(Json::parse(j.dump())) == c);
  Json broken = j;
  broken.erase("simplexes");
  CHECK_THROWS_AS(complex_from_json(broken), Error);
}

TEST_CASE("polytope and verdict documents") {
  const Polytope seg = convex_hull({pt({"0", "1"}), pt({"1", "0"})});
  const Json p = polytope_to_json(seg);
  CHECK(p["dimension"] == 1);
  CHECK(p["extremals"].size() == 2);
  CHECK(p["facets"].size() == 2);
  CHECK(p["hull"]["equations"].size() == 1);

  const Book book({{f("x1"), q("1/2")}, {f("x2"), q("1/2")}, {f("x1 + x2"), q("1")}});
  const RegularComplex c = linearize(book.formulas());
  const Json v = verdict_to_json(decide_strict(book, c), c);
  CHECK(v["verdict"] == "coherent");
  CHECK(v["arm"] == "CoherentNotStrict");
  CHECK(v["sigma"] == Json::array({"0", "0", "-1"}));
  CHECK(v["lambda"]["(1/2,1/2)"] == "1");
  CHECK(v["vertex_order"].size() == c.vertex_count());
}

TEST_CASE("books") {
  const Book b({{f("x1 + x2"), q("3/4")}, {f("~x1"), q("0")}});
  const Json j = book_to_json(b);
  CHECK(j == Json::parse(R"([["x1 + x2", "3/4"], ["~x1", "0"]])"));
  const Book back = book_from_json(j);
  CHECK(back.formulas() == b.formulas());
  CHECK(back.values() == b.values());
  CHECK_THROWS(book_from_json(Json::parse(R"([["x1", "3/2"]])")));
}

TEST_CASE("sessions replay identically") {
  auto s = ExtensionSession::open(half_book());
  s.extend(f("x1 + x1"));
  s.extend(f("x1 * x1"));
  const Json j = session_to_json(s);
  CHECK(j["history"][0] == Json::array({"x1 + x1", "2/3"}));
  CHECK(j["dimension"] == 1);
  const ExtensionSession back = session_from_json(Json::parse(j.dump()));
  CHECK(back.complex() == s.complex());
  CHECK(back.state().weights() == s.state().weights());
  CHECK(back.history() == s.history());
  CHECK(session_to_json(back) == j);

  Json value = j;
  value["history"][0][1] = "3/5";
  CHECK_THROWS_AS(session_from_json(value), Error);
  Json weights = j;
  weights["lambda"]["(1)"] = "1/2";
  CHECK_THROWS_AS(session_from_json(weights), Error);
  Json shape = j;
  shape["complex"]["vertices"][0] = Json::array({"1/7"});
  CHECK_THROWS_AS(session_from_json(shape), Error);
}
