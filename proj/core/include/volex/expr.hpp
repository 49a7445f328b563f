#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "volex/chart.hpp"
#include "volex/jet.hpp"

namespace volex {

/// A parsed closed-form coordinate expression. Immutable after parse;
/// evaluation is pure and safe to call concurrently.
///
/// Grammar (documented in docs/expressions.md):
///   expression := term  { ('+'|'-') term }
///   term       := unary { ('*'|'/') unary }
///   unary      := '-' unary | power
///   power      := primary [ '^' unary ]          (right-associative)
///   primary    := number | coordinate | 'pi' | func '(' expression ')'
///               | '(' expression ')'
/// Functions: sin cos tan exp log sqrt sinh cosh tanh abs.
class Expr {
 public:
  enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Abs };
  enum class BinOp { Add, Sub, Mul, Div, Pow };

  struct Number { double value; };
  struct Symbol { int coord; };
  struct Unary { int operand; };  // negation
  struct Binary { BinOp op; int lhs; int rhs; };
  struct Call { Func fn; int arg; };
  using Node = std::variant<Number, Symbol, Unary, Binary, Call>;

  /// Parse `src` against `chart`; throws SyntaxError (with byte offset)
  /// or UnknownSymbol.
  static Expr parse(std::string_view src, const Chart& chart);
  /// A literal constant on the given chart.
  static Expr number(double v, const Chart& chart);

  /// Value at a point (one real per chart coordinate).
  double eval(std::span<const double> p) const;
  /// Value, gradient and Hessian at a point, exact to roundoff.
  /// Throws DomainError / NonFinite.
  Jet2 eval_jet2(std::span<const double> p) const;
  /// Evaluate with arbitrary per-coordinate input jets (chain rule through
  /// the coordinates); used to differentiate composite maps such as the
  /// flow step.
  Jet2 eval_at(std::span<const Jet2> coords) const;

  /// Re-serialize; the result parses back to a structurally identical AST.
  std::string serialize() const;

  int dim() const { return static_cast<int>(coord_names_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::vector<Node> nodes_;  // post-ordered: children precede parents
  int root_ = -1;
  std::vector<std::string> coord_names_;

  friend class ExprBuilder;
};

/// Programmatic AST construction (used by tests and generators).
class ExprBuilder {
 public:
  explicit ExprBuilder(const Chart& chart);
  int number(double v);
  int symbol(int coord);
  int neg(int a);
  int binary(Expr::BinOp op, int a, int b);
  int call(Expr::Func f, int a);
  Expr finish(int root);

 private:
  Expr e_;
};

}  // namespace volex
