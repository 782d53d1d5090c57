#include <cctype>
#include <charconv>
#include <string>

#include "ctdde/errors.hpp"
#include "ctdde/expr.hpp"
#include "expr_nodes.hpp"

namespace ctdde {

// Recursive-descent parser for the grammar in docs/GRAMMAR.md.
//
//   expression     = additive
//   additive       = multiplicative { ("+"|"-") multiplicative }
//   multiplicative = unary { ("*"|"/") unary }
//   unary          = "-" unary | power
//   power          = primary [ "^" unary ]          (right associative)
//   primary        = number | "t" | fn "(" expression ")"
//                  | "(" expression ")" | piecewise
//   piecewise      = "piecewise" "(" { condition ":" expression ";" }
//                    "otherwise" ":" expression ")"
//   condition      = conjunction { "or" conjunction }
//   conjunction    = comparison { "and" comparison }
//   comparison     = additive ("<"|"<="|">"|">=") additive
//                  | "(" condition ")"
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression run() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", 0);
    Expression e = parse_additive();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos_);
  }

  // Reads an identifier at the cursor without consuming it.
  std::string peek_ident() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= src_.size() || !(std::isalpha(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
      return {};
    std::size_t q = p;
    while (q < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[q])) || src_[q] == '_'))
      ++q;
    return std::string(src_.substr(p, q - p));
  }

  bool eat_keyword(std::string_view kw) {
    if (peek_ident() == kw) {
      pos_ += kw.size();
      return true;
    }
    return false;
  }

  Expression parse_additive() {
    Expression lhs = parse_multiplicative();
    for (;;) {
      if (eat('+')) {
        lhs = Expression::binary(BinaryOp::Add, std::move(lhs), parse_multiplicative());
      } else if (peek() == '-') {
        ++pos_;
        lhs = Expression::binary(BinaryOp::Sub, std::move(lhs), parse_multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_multiplicative() {
    Expression lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = Expression::binary(BinaryOp::Mul, std::move(lhs), parse_unary());
      } else if (eat('/')) {
        lhs = Expression::binary(BinaryOp::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expression parse_unary() {
    if (eat('-')) return Expression::unary(UnaryOp::Neg, parse_unary());
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (eat('^')) {
      // Exponent is a unary so that 2^-3 and a^b^c parse naturally.
      return Expression::binary(BinaryOp::Pow, std::move(base), parse_unary());
    }
    return base;
  }

  Expression parse_primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expression e = parse_additive();
      expect(')', "to close parenthesized expression");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Expression::constant(parse_number());
    }
    std::string ident = peek_ident();
    if (ident.empty()) throw ParseError("expected a number, 't', function or '('", pos_);
    std::size_t ident_pos = pos_;
    pos_ += ident.size();
    if (ident == "t") return Expression::variable();
    if (ident == "piecewise") return parse_piecewise();
    UnaryOp op;
    if (ident == "floor")
      op = UnaryOp::Floor;
    else if (ident == "frac")
      op = UnaryOp::Frac;
    else if (ident == "sin")
      op = UnaryOp::Sin;
    else if (ident == "cos")
      op = UnaryOp::Cos;
    else if (ident == "exp")
      op = UnaryOp::Exp;
    else if (ident == "abs")
      op = UnaryOp::Abs;
    else
      throw ParseError("unknown identifier '" + ident + "'", ident_pos);
    expect('(', ("after '" + ident + "'").c_str());
    Expression arg = parse_additive();
    expect(')', "to close function argument");
    return Expression::unary(op, std::move(arg));
  }

  Expression parse_piecewise() {
    expect('(', "after 'piecewise'");
    std::vector<std::pair<Condition, Expression>> branches;
    for (;;) {
      if (eat_keyword("otherwise")) {
        expect(':', "after 'otherwise'");
        Expression fallback = parse_additive();
        expect(')', "to close piecewise");
        return Expression::piecewise(std::move(branches), std::move(fallback));
      }
      if (peek() == ')') {
        throw ParseError("piecewise requires a terminal 'otherwise' branch", pos_);
      }
      Condition cond = parse_condition();
      expect(':', "after piecewise condition");
      Expression value = parse_additive();
      branches.emplace_back(std::move(cond), std::move(value));
      if (!eat(';')) {
        throw ParseError("piecewise requires a terminal 'otherwise' branch", pos_);
      }
    }
  }

  Condition parse_condition() {
    Condition lhs = parse_conjunction();
    while (eat_keyword("or")) {
      lhs = Condition::logical_or(std::move(lhs), parse_conjunction());
    }
    return lhs;
  }

  Condition parse_conjunction() {
    Condition lhs = parse_comparison();
    while (eat_keyword("and")) {
      lhs = Condition::logical_and(std::move(lhs), parse_comparison());
    }
    return lhs;
  }

  Condition parse_comparison() {
    // '(' may open either a grouped condition or a parenthesized
    // expression; try the condition reading first and fall back.
    if (peek() == '(') {
      std::size_t saved = pos_;
      ++pos_;
      try {
        Condition c = parse_condition();
        expect(')', "to close grouped condition");
        return c;
      } catch (const ParseError&) {
        pos_ = saved;
      }
    }
    Expression lhs = parse_additive();
    skip_ws();
    CmpOp op;
    if (eat('<')) {
      op = eat('=') ? CmpOp::Le : CmpOp::Lt;
    } else if (eat('>')) {
      op = eat('=') ? CmpOp::Ge : CmpOp::Gt;
    } else {
      throw ParseError("expected a comparison operator (<, <=, >, >=)", pos_);
    }
    Expression rhs = parse_additive();
    return Condition::compare(op, std::move(lhs), std::move(rhs));
  }

  double parse_number() {
    skip_ws();
    std::size_t start = pos_;
    double value = 0.0;
    auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
    if (res.ec != std::errc{}) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(res.ptr - src_.data());
    return value;
  }
};

Expression parse_expression(std::string_view text) {
  return Parser(text).run();
}

}  // namespace ctdde
