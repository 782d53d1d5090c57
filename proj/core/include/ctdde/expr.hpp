#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctdde/interval.hpp"

namespace ctdde {

enum class UnaryOp { Neg, Floor, Frac, Sin, Cos, Exp, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class CmpOp { Lt, Le, Gt, Ge };

namespace detail {
struct Node;
struct CondNode;
}  // namespace detail

class Expression;

/// Boolean combination of comparisons between expressions, used as a
/// piecewise branch guard. Comparisons are exact (no epsilon).
class Condition {
 public:
  static Condition compare(CmpOp op, Expression lhs, Expression rhs);
  static Condition logical_and(Condition lhs, Condition rhs);
  static Condition logical_or(Condition lhs, Condition rhs);

  bool eval(double t) const;
  std::string str() const;
  bool same_structure(const Condition& other) const;

 private:
  explicit Condition(std::shared_ptr<const detail::CondNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::CondNode> node_;
  friend class Expression;
  friend class Parser;
};

/// Immutable closed-form function of the single variable `t`, built from
/// constants, arithmetic (+ - * / ^), unary ops (neg, floor, frac, sin,
/// cos, exp, abs) and piecewise branches with a terminal `otherwise`.
///
/// The concrete grammar accepted by parse_expression() is documented in
/// docs/GRAMMAR.md. Expressions are immutable after construction; eval and
/// eval_interval are pure and safe to call concurrently.
class Expression {
 public:
  /// Constant zero.
  Expression();

  static Expression constant(double value);
  static Expression variable();
  static Expression unary(UnaryOp op, Expression arg);
  static Expression binary(BinaryOp op, Expression lhs, Expression rhs);
  /// Branches are tried in order; `otherwise` is the mandatory fallback.
  static Expression piecewise(std::vector<std::pair<Condition, Expression>> branches,
                              Expression otherwise);

  /// Point evaluation with real semantics: floor(t) is the greatest integer
  /// <= t, frac(t) = t - floor(t) in [0,1), piecewise takes the first true
  /// branch. Division by zero, 0^negative, fractional powers of non-positive
  /// bases and produced NaNs throw EvalError.
  double eval(double t) const;

  /// Interval enclosure of { eval(s) : s in domain }. The extension is the
  /// natural one with critical-point handling for sin/cos and exact floors;
  /// piecewise unions every branch not provably false on the domain.
  /// A possible division by zero throws IntervalError carrying the
  /// offending sub-interval.
  Interval eval_interval(Interval domain) const;

  /// Prints so that parse_expression(str()) is structurally identical.
  std::string str() const;

  bool same_structure(const Expression& other) const;

 private:
  explicit Expression(std::shared_ptr<const detail::Node> n) : root_(std::move(n)) {}
  std::shared_ptr<const detail::Node> root_;
  friend class Parser;
  friend class Condition;
};

/// Parses the expression grammar (see docs/GRAMMAR.md). Precedence:
/// ^ binds tighter than unary minus, which binds tighter than * /, which
/// bind tighter than + -. Throws ParseError with a byte position on
/// malformed input, unknown identifiers, or a piecewise without
/// `otherwise`.
Expression parse_expression(std::string_view text);

}  // namespace ctdde
