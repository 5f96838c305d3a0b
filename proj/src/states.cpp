#include "luka/states.hpp"

#include "luka/geometry.hpp"

namespace luka {

DiscreteState::DiscreteState(std::shared_ptr<const RegularComplex> complex, VectorQ weights)
    : complex_(std::move(complex)), weights_(std::move(weights)) {
  if (!complex_) throw Error("state without a complex");
  if (weights_.size() != static_cast<Eigen::Index>(complex_->vertex_count())) {
    throw DimensionError("state has " + std::to_string(weights_.size()) + " weights for " +
                         std::to_string(complex_->vertex_count()) + " vertices");
  }
  if ((weights_.array() < Rational(0)).any()) throw Error("state weights must be nonnegative");
  if (weights_.sum() != 1) throw Error("state weights must sum to 1");
}

bool DiscreteState::faithful() const { return (weights_.array() > Rational(0)).all(); }

Rational state_eval(const DiscreteState& s, const Formula& f) {
  if (f.arity() > s.dimension()) {
    throw DimensionError("formula has arity " + std::to_string(f.arity()) + " but the state lives in dimension " +
                         std::to_string(s.dimension()));
  }
  const auto values = restrict(f, s.complex());
  Rational total(0);
  for (std::size_t v = 0; v < values.size(); ++v) total += values[v] * s.weights()(static_cast<Eigen::Index>(v));
  return total;
}

std::vector<Rational> restrict(const Formula& f, const RegularComplex& c) {
  if (f.arity() > c.dimension()) throw DimensionError("formula arity exceeds the complex dimension");
  std::vector<Rational> out;
  out.reserve(c.vertex_count());
  for (const auto& v : c.vertices()) out.push_back(eval(f, v));
  return out;
}

Rational lebesgue_state(const Formula& f, int n) {
  n = std::max({n, f.arity(), 1});
  const RegularComplex c = linearize({f}, n);
  const auto values = restrict(f, c);
  Rational total(0);
  std::vector<VectorQ> pts;
  for (const auto& s : c.simplexes()) {
    pts.clear();
    Rational sum(0);
    for (auto i : s) {
      pts.push_back(c.vertex(i));
      sum += values[i];
    }
    total += simplex_volume(pts) * sum / Rational(static_cast<int>(s.size()));
  }
  return total;
}

NotStrictlyCoherent::NotStrictlyCoherent(Verdict v)
    : Error(std::string("book is not strictly coherent (") +
            (std::holds_alternative<Incoherent>(v) ? "incoherent" : "coherent, not strict") + ")"),
      verdict_(std::move(v)) {}

ExtensionSession ExtensionSession::open(const Book& book, int n) {
  if (book.empty()) throw Error("empty book");
  if (n == 0) n = book.arity();
  if (book.arity() > n) throw DimensionError("book arity exceeds the requested dimension");
  auto c = std::make_shared<const RegularComplex>(linearize(book.formulas(), n));
  const MatrixQ profile = vertex_profile(book.formulas(), *c);
  const auto best = max_t_weights(profile, book.values());
  if (!best || best->second <= 0) throw NotStrictlyCoherent(decide_strict_on_profile(profile, book.values()));
  return ExtensionSession(book, DiscreteState(c, best->first));
}

ExtensionSession ExtensionSession::replay(const Book& book, int n, const std::vector<Formula>& formulas) {
  auto s = open(book, n);
  for (const auto& g : formulas) s.extend(g);
  return s;
}

Rational ExtensionSession::extend(const Formula& g) {
  if (g.arity() > dimension()) {
    throw DimensionError("formula has arity " + std::to_string(g.arity()) + " but the session has dimension " +
                         std::to_string(dimension()));
  }
  auto c = std::make_shared<const RegularComplex>(refine(complex(), {g}));
  std::vector<Formula> fixed = book_.formulas();
  std::vector<Rational> values;
  for (const auto& e : book_.entries()) values.push_back(e.value);
  for (const auto& [h, v] : history_) {
    fixed.push_back(h);
    values.push_back(v);
  }
  const auto best = max_t_weights(vertex_profile(fixed, *c), make_vector(values));
  if (!best || best->second <= 0) throw Error("internal: no faithful state extends the session history");
  DiscreteState next(c, best->first);
  Rational value = state_eval(next, g);
  state_ = std::move(next);
  history_.emplace_back(g, value);
  return value;
}

}  // namespace luka
