#include "luka/json_io.hpp"

namespace luka {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing JSON field '") + key + "'");
  return j.at(key);
}

std::string text_of(const Json& j) {
  if (!j.is_string()) throw Error("expected a JSON string, got " + j.dump());
  return j.get<std::string>();
}

Json weights_json(const VectorQ& w, const RegularComplex& c) {
  Json out = Json::object();
  for (std::size_t v = 0; v < c.vertex_count(); ++v) {
    out[point_to_string(c.vertex(v))] = rational_to_json(w(static_cast<Eigen::Index>(v)));
  }
  return out;
}

Json pairs_json(const std::vector<std::pair<Formula, Rational>>& entries) {
  Json out = Json::array();
  for (const auto& [f, v] : entries) out.push_back(Json::array({render(f), rational_to_json(v)}));
  return out;
}

std::vector<std::pair<Formula, Rational>> pairs_from_json(const Json& j) {
  if (!j.is_array()) throw Error("expected an array of [formula, value] pairs");
  std::vector<std::pair<Formula, Rational>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw Error("expected a [formula, value] pair, got " + e.dump());
    out.emplace_back(parse(text_of(e[0])), rational_from_json(e[1]));
  }
  return out;
}

}  // namespace

Json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  return parse_rational(text_of(j));
}

Json point_to_json(const VectorQ& x) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(rational_to_json(x(i)));
  return out;
}

VectorQ point_from_json(const Json& j) {
  if (!j.is_array()) throw Error("expected a point array, got " + j.dump());
  VectorQ x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) x(static_cast<Eigen::Index>(i)) = rational_from_json(j[i]);
  return x;
}

Json complex_to_json(const RegularComplex& c) {
  Json vertices = Json::array();
  for (const auto& v : c.vertices()) vertices.push_back(point_to_json(v));
  Json simplexes = Json::array();
  for (const auto& s : c.simplexes()) simplexes.push_back(s);
  return Json{{"n", c.dimension()}, {"vertices", std::move(vertices)}, {"simplexes", std::move(simplexes)}};
}

RegularComplex complex_from_json(const Json& j) {
  const Json& n = field(j, "n");
  if (!n.is_number_integer()) throw Error("complex field 'n' must be an integer");
  std::vector<VectorQ> vertices;
  for (const auto& v : field(j, "vertices")) vertices.push_back(point_from_json(v));
  std::vector<std::vector<std::size_t>> simplexes;
  for (const auto& s : field(j, "simplexes")) {
    if (!s.is_array()) throw Error("simplex must be an array of vertex indices");
    std::vector<std::size_t> ids;
    for (const auto& i : s) {
      if (!i.is_number_unsigned()) throw Error("vertex index must be a nonnegative integer");
      ids.push_back(i.get<std::size_t>());
    }
    simplexes.push_back(std::move(ids));
  }
  return RegularComplex(n.get<int>(), std::move(vertices), std::move(simplexes));
}

Json polytope_to_json(const Polytope& p) {
  Json extremals = Json::array();
  for (const auto& x : p.extremals()) extremals.push_back(point_to_json(x));
  Json facets = Json::array();
  for (const auto& f : p.facets()) {
    facets.push_back(Json{{"normal", point_to_json(f.normal)}, {"offset", rational_to_json(f.offset)}, {"vertices", f.vertices}});
  }
  Json equations = Json::array();
  for (Eigen::Index r = 0; r < p.hull_equations().rows(); ++r) {
    equations.push_back(point_to_json(p.hull_equations().row(r).transpose()));
  }
  return Json{{"ambient", p.ambient_dimension()},
              {"dimension", p.dimension()},
              {"extremals", std::move(extremals)},
              {"facets", std::move(facets)},
              {"hull", Json{{"equations", std::move(equations)}, {"rhs", point_to_json(p.hull_rhs())}}}};
}

Json verdict_to_json(const Verdict& v, const RegularComplex& c) {
  static const char* const arms[] = {"Incoherent", "Coherent", "CoherentNotStrict", "StrictlyCoherent"};
  Json out{{"verdict", verdict_name(v)}, {"arm", arms[v.index()]}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (!std::is_same_v<T, Incoherent>) out["lambda"] = weights_json(x.weights, c);
        if constexpr (std::is_same_v<T, Incoherent> || std::is_same_v<T, CoherentNotStrict>) {
          out["sigma"] = point_to_json(x.stakes);
        }
      },
      v);
  Json order = Json::array();
  for (const auto& p : c.vertices()) order.push_back(point_to_string(p));
  out["vertex_order"] = std::move(order);
  return out;
}

Json book_to_json(const Book& book) {
  std::vector<std::pair<Formula, Rational>> entries;
  for (const auto& e : book.entries()) entries.emplace_back(e.formula, e.value);
  return pairs_json(entries);
}

Book book_from_json(const Json& j) {
  std::vector<BookEntry> entries;
  for (auto& [f, v] : pairs_from_json(j)) entries.push_back({f, v});
  return Book(std::move(entries));
}

Json session_to_json(const ExtensionSession& s) {
  return Json{{"book", book_to_json(s.book())},
              {"dimension", s.dimension()},
              {"history", pairs_json(s.history())},
              {"complex", complex_to_json(s.complex())},
              {"lambda", weights_json(s.state().weights(), s.complex())}};
}

ExtensionSession session_from_json(const Json& j) {
  const Book book = book_from_json(field(j, "book"));
  const Json& n = field(j, "dimension");
  if (!n.is_number_integer()) throw Error("session field 'dimension' must be an integer");
  const auto history = pairs_from_json(field(j, "history"));
  std::vector<Formula> formulas;
  for (const auto& [f, v] : history) formulas.push_back(f);
  ExtensionSession s = ExtensionSession::replay(book, n.get<int>(), formulas);
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (s.history()[i].second != history[i].second) {
      throw Error("session replay disagrees with the stored value of " + render(history[i].first));
    }
  }
  if (!(s.complex() == complex_from_json(field(j, "complex")))) throw Error("session replay disagrees with the stored complex");
  if (weights_json(s.state().weights(), s.complex()) != field(j, "lambda")) {
    throw Error("session replay disagrees with the stored weights");
  }
  return s;
}

}  // namespace luka
