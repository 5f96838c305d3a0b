#pragma once

// Łukasiewicz formulas over variables x1, x2, ... and their evaluation as
// [0,1]-valued functions on rational points of the cube.
//
// Concrete syntax (one ASCII token per connective), loosest binding last:
//
//     ~   negation            1 - x
//     *   strong conjunction  max(0, x + y - 1)
//     +   strong disjunction  min(1, x + y)
//     &   meet                min(x, y)
//     |   join                max(x, y)
//     ->  implication         min(1, 1 - x + y)     (right associative)
//
// Constants are `0` and `1`; `#` starts a comment that runs to end of line.
//
// Formulas are immutable and share subtrees freely.  Synthesized formulas
// are DAGs whose printed form can be much larger than their node count, so
// every traversal here works on distinct nodes.

#include "luka/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <map>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace luka {

enum class Connective : std::uint8_t { Var, Zero, One, Neg, Oplus, Odot, Implies, Meet, Join };

class Formula {
 public:
  struct Node;

  static Formula var(int index);
  static Formula zero();
  static Formula one();
  static Formula neg(Formula f);
  static Formula oplus(Formula a, Formula b);
  static Formula odot(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula meet(Formula a, Formula b);
  static Formula join(Formula a, Formula b);
  static Formula binary(Connective op, Formula a, Formula b);

  Connective kind() const;
  /// Variable index (1-based); only meaningful for Var.
  int index() const;
  const Formula& child() const { return lhs(); }
  const Formula& lhs() const;
  const Formula& rhs() const;
  bool is_binary() const;

  /// Largest variable index occurring, 0 for closed formulas.
  int arity() const;
  std::size_t hash() const;
  /// Number of distinct nodes reachable from the root.
  std::size_t dag_size() const;

  const Node* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Connective kind;
  int index = 0;
  int arity = 0;
  std::size_t hash = 0;
  std::vector<Formula> children;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

Formula parse(std::string_view text);

/// Precedence-minimal rendering; parse(render(f)) == f.
std::string render(const Formula& f);

/// Exact value of the McNaughton function of `f` at `x`.
/// Throws DimensionError when x has fewer coordinates than f's arity.
Rational eval(const Formula& f, const VectorQ& x);

/// n-fold strong conjunction f * f * ... * f (left nested).
Formula power(const Formula& f, int n);

/// Truth functions of the standard MV-algebra.
Rational apply_connective(Connective op, const Rational& a, const Rational& b);

/// A set of formulas flattened into one topologically ordered program over
/// their distinct (structurally deduplicated) subformulas.  Evaluating it at
/// a point yields the value of every subformula at once.
class FormulaProgram {
 public:
  struct Instruction {
    Connective op;
    int index;  // variable index for Var
    int lhs;    // operand slots, -1 when unused
    int rhs;
  };

  explicit FormulaProgram(const std::vector<Formula>& roots);

  const std::vector<Instruction>& instructions() const { return code_; }
  /// Slot holding the value of the i-th root.
  int root_slot(std::size_t i) const { return roots_[i]; }
  std::size_t root_count() const { return roots_.size(); }
  int arity() const { return arity_; }

  std::vector<Rational> run(const VectorQ& x) const;

 private:
  int intern(const Formula& f, std::unordered_map<const Formula::Node*, int>& seen);

  std::vector<Instruction> code_;
  std::vector<int> roots_;
  std::map<std::tuple<int, int, int, int>, int> table_;
  int arity_ = 0;
};

}  // namespace luka
