#include "luka/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <set>
#include <unordered_set>
#include <utility>

namespace luka {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int precedence(Connective op) {
  switch (op) {
    case Connective::Implies: return 1;
    case Connective::Join: return 2;
    case Connective::Meet: return 3;
    case Connective::Oplus: return 4;
    case Connective::Odot: return 5;
    case Connective::Neg: return 6;
    default: return 7;
  }
}

const char* symbol(Connective op) {
  switch (op) {
    case Connective::Implies: return "->";
    case Connective::Join: return "|";
    case Connective::Meet: return "&";
    case Connective::Oplus: return "+";
    case Connective::Odot: return "*";
    default: return "?";
  }
}

}  // namespace

Formula Formula::var(int index) {
  if (index < 1) throw Error("variable index must be positive, got " + std::to_string(index));
  auto node = std::make_shared<Node>();
  node->kind = Connective::Var;
  node->index = index;
  node->arity = index;
  node->hash = mix(mix(0, static_cast<std::size_t>(Connective::Var)), static_cast<std::size_t>(index));
  return Formula(std::move(node));
}

Formula Formula::zero() {
  static const Formula z = [] {
    auto node = std::make_shared<Node>();
    node->kind = Connective::Zero;
    node->hash = mix(0, static_cast<std::size_t>(Connective::Zero));
    return Formula(std::move(node));
  }();
  return z;
}

Formula Formula::one() {
  static const Formula o = [] {
    auto node = std::make_shared<Node>();
    node->kind = Connective::One;
    node->hash = mix(0, static_cast<std::size_t>(Connective::One));
    return Formula(std::move(node));
  }();
  return o;
}

Formula Formula::neg(Formula f) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::Neg;
  node->arity = f.arity();
  node->hash = mix(mix(0, static_cast<std::size_t>(Connective::Neg)), f.hash());
  node->children.push_back(std::move(f));
  return Formula(std::move(node));
}

Formula Formula::binary(Connective op, Formula a, Formula b) {
  switch (op) {
    case Connective::Oplus:
    case Connective::Odot:
    case Connective::Implies:
    case Connective::Meet:
    case Connective::Join: break;
    default: throw Error("not a binary connective");
  }
  auto node = std::make_shared<Node>();
  node->kind = op;
  node->arity = std::max(a.arity(), b.arity());
  node->hash = mix(mix(mix(0, static_cast<std::size_t>(op)), a.hash()), b.hash());
  node->children.push_back(std::move(a));
  node->children.push_back(std::move(b));
  return Formula(std::move(node));
}

Formula Formula::oplus(Formula a, Formula b) { return binary(Connective::Oplus, std::move(a), std::move(b)); }
Formula Formula::odot(Formula a, Formula b) { return binary(Connective::Odot, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return binary(Connective::Implies, std::move(a), std::move(b)); }
Formula Formula::meet(Formula a, Formula b) { return binary(Connective::Meet, std::move(a), std::move(b)); }
Formula Formula::join(Formula a, Formula b) { return binary(Connective::Join, std::move(a), std::move(b)); }

Connective Formula::kind() const { return node_->kind; }
int Formula::index() const { return node_->index; }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }
bool Formula::is_binary() const { return node_->children.size() == 2; }
int Formula::arity() const { return node_->arity; }
std::size_t Formula::hash() const { return node_->hash; }

std::size_t Formula::dag_size() const {
  std::unordered_set<const Node*> seen;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for (const auto& c : n->children) stack.push_back(c.id());
  }
  return seen.size();
}

bool operator==(const Formula& a, const Formula& b) {
  std::set<std::pair<const Formula::Node*, const Formula::Node*>> proven;
  std::function<bool(const Formula&, const Formula&)> eq = [&](const Formula& x, const Formula& y) {
    if (x.id() == y.id()) return true;
    if (x.hash() != y.hash() || x.kind() != y.kind() || x.index() != y.index()) return false;
    if (proven.count({x.id(), y.id()}) != 0) return true;
    const auto& xc = x.node_->children;
    const auto& yc = y.node_->children;
    if (xc.size() != yc.size()) return false;
    for (std::size_t i = 0; i < xc.size(); ++i) {
      if (!eq(xc[i], yc[i])) return false;
    }
    proven.insert({x.id(), y.id()});
    return true;
  };
  return eq(a, b);
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(const std::string& message, std::size_t position)
    : Error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = implication();
    skip();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(std::string_view token) {
    skip();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  Formula implication() {
    Formula left = disjunction();
    if (accept("->")) return Formula::implies(std::move(left), implication());
    return left;
  }

  template <typename Next>
  Formula left_chain(Connective op, std::string_view token, Next next) {
    Formula acc = (this->*next)();
    while (true) {
      skip();
      // `-` is only ever the start of `->`; never mistake it for an operator.
      if (token == "+" || token == "*" || token == "&" || token == "|") {
        if (pos_ < text_.size() && text_.substr(pos_, token.size()) == token) {
          pos_ += token.size();
          acc = Formula::binary(op, std::move(acc), (this->*next)());
          continue;
        }
      }
      return acc;
    }
  }

  Formula disjunction() { return left_chain(Connective::Join, "|", &Parser::conjunction); }
  Formula conjunction() { return left_chain(Connective::Meet, "&", &Parser::sum); }
  Formula sum() { return left_chain(Connective::Oplus, "+", &Parser::product); }
  Formula product() { return left_chain(Connective::Odot, "*", &Parser::unary); }

  Formula unary() {
    if (accept("~")) return Formula::neg(unary());
    return atom();
  }

  Formula atom() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula inner = implication();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
        throw ParseError("only the constants 0 and 1 are allowed", pos_ - 1);
      }
      return c == '0' ? Formula::zero() : Formula::one();
    }
    if (c == 'x') {
      const std::size_t start = pos_;
      ++pos_;
      std::size_t end = pos_;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end])) != 0) ++end;
      if (end == pos_) throw ParseError("expected variable index after 'x'", pos_);
      if (end - pos_ > 6) throw ParseError("variable index too large", start);
      const int index = std::stoi(std::string(text_.substr(pos_, end - pos_)));
      if (index == 0) throw ParseError("variable index 0 is not allowed", start);
      pos_ = end;
      return Formula::var(index);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::Var:
      out += 'x';
      out += std::to_string(f.index());
      return;
    case Connective::Zero: out += '0'; return;
    case Connective::One: out += '1'; return;
    case Connective::Neg: {
      out += '~';
      const bool paren = precedence(f.child().kind()) < precedence(Connective::Neg);
      if (paren) out += '(';
      render_into(f.child(), out);
      if (paren) out += ')';
      return;
    }
    default: break;
  }
  const int p = precedence(f.kind());
  const bool right_assoc = f.kind() == Connective::Implies;
  const int lp = precedence(f.lhs().kind());
  const int rp = precedence(f.rhs().kind());
  const bool lparen = right_assoc ? lp <= p : lp < p;
  const bool rparen = right_assoc ? rp < p : rp <= p;
  if (lparen) out += '(';
  render_into(f.lhs(), out);
  if (lparen) out += ')';
  out += ' ';
  out += symbol(f.kind());
  out += ' ';
  if (rparen) out += '(';
  render_into(f.rhs(), out);
  if (rparen) out += ')';
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Semantics

Rational apply_connective(Connective op, const Rational& a, const Rational& b) {
  static const Rational one(1);
  static const Rational zero(0);
  switch (op) {
    case Connective::Neg: return one - a;
    case Connective::Oplus: return std::min(one, a + b);
    case Connective::Odot: return std::max(zero, a + b - one);
    case Connective::Implies: return std::min(one, one - a + b);
    case Connective::Meet: return std::min(a, b);
    case Connective::Join: return std::max(a, b);
    default: throw Error("apply_connective: not an operator");
  }
}

Rational eval(const Formula& f, const VectorQ& x) {
  if (x.size() < f.arity()) {
    throw DimensionError("point of dimension " + std::to_string(x.size()) + " for formula of arity " +
                         std::to_string(f.arity()));
  }
  std::unordered_map<const Formula::Node*, Rational> memo;
  std::function<Rational(const Formula&)> go = [&](const Formula& g) -> Rational {
    switch (g.kind()) {
      case Connective::Var: return x(g.index() - 1);
      case Connective::Zero: return Rational(0);
      case Connective::One: return Rational(1);
      default: break;
    }
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    Rational v = g.kind() == Connective::Neg ? Rational(1) - go(g.child())
                                             : apply_connective(g.kind(), go(g.lhs()), go(g.rhs()));
    memo.emplace(g.id(), v);
    return v;
  };
  return go(f);
}

Formula power(const Formula& f, int n) {
  if (n < 1) throw Error("power: exponent must be at least 1");
  Formula acc = f;
  for (int i = 1; i < n; ++i) acc = Formula::odot(acc, f);
  return acc;
}

// ---------------------------------------------------------------------------
// FormulaProgram

FormulaProgram::FormulaProgram(const std::vector<Formula>& roots) {
  std::unordered_map<const Formula::Node*, int> seen;
  for (const auto& r : roots) {
    roots_.push_back(intern(r, seen));
    arity_ = std::max(arity_, r.arity());
  }
}

int FormulaProgram::intern(const Formula& f, std::unordered_map<const Formula::Node*, int>& seen) {
  if (auto it = seen.find(f.id()); it != seen.end()) return it->second;
  int lhs = -1;
  int rhs = -1;
  if (f.kind() == Connective::Neg) {
    lhs = intern(f.child(), seen);
  } else if (f.is_binary()) {
    lhs = intern(f.lhs(), seen);
    rhs = intern(f.rhs(), seen);
  }
  const int index = f.kind() == Connective::Var ? f.index() : 0;
  const auto key = std::make_tuple(static_cast<int>(f.kind()), index, lhs, rhs);
  int slot;
  if (auto it = table_.find(key); it != table_.end()) {
    slot = it->second;
  } else {
    slot = static_cast<int>(code_.size());
    code_.push_back({f.kind(), index, lhs, rhs});
    table_.emplace(key, slot);
  }
  seen.emplace(f.id(), slot);
  return slot;
}

std::vector<Rational> FormulaProgram::run(const VectorQ& x) const {
  if (x.size() < arity_) throw DimensionError("point dimension below formula arity");
  std::vector<Rational> v(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const auto& in = code_[i];
    switch (in.op) {
      case Connective::Var: v[i] = x(in.index - 1); break;
      case Connective::Zero: v[i] = 0; break;
      case Connective::One: v[i] = 1; break;
      case Connective::Neg: v[i] = Rational(1) - v[static_cast<std::size_t>(in.lhs)]; break;
      default:
        v[i] = apply_connective(in.op, v[static_cast<std::size_t>(in.lhs)], v[static_cast<std::size_t>(in.rhs)]);
    }
  }
  return v;
}

}  // namespace luka
