#include "ctdde/expr.hpp"

#include <cmath>
#include <sstream>

#include "ctdde/errors.hpp"
#include "ctdde/util.hpp"
#include "expr_nodes.hpp"

namespace ctdde {

using detail::Binary;
using detail::Branch;
using detail::Compare;
using detail::CondAnd;
using detail::CondNode;
using detail::CondOr;
using detail::CondPtr;
using detail::Constant;
using detail::Node;
using detail::NodePtr;
using detail::overloaded;
using detail::Piecewise;
using detail::Unary;
using detail::Var;

// ---------------------------------------------------------------------------
// construction

namespace {

NodePtr make_node(std::variant<Constant, Var, Unary, Binary, Piecewise> v) {
  auto n = std::make_shared<Node>();
  n->v = std::move(v);
  return n;
}

double normalize_zero(double v) { return v == 0.0 ? 0.0 : v; }

}  // namespace

Expression::Expression() : root_(make_node(Constant{0.0})) {}

Expression Expression::constant(double value) {
  return Expression(make_node(Constant{normalize_zero(value)}));
}

Expression Expression::variable() { return Expression(make_node(Var{})); }

Expression Expression::unary(UnaryOp op, Expression arg) {
  // Fold negation of a literal so that printing negative constants
  // round-trips structurally.
  if (op == UnaryOp::Neg) {
    if (auto* c = std::get_if<Constant>(&arg.root_->v)) {
      return constant(-c->value);
    }
  }
  return Expression(make_node(Unary{op, std::move(arg.root_)}));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
  return Expression(make_node(Binary{op, std::move(lhs.root_), std::move(rhs.root_)}));
}

Expression Expression::piecewise(std::vector<std::pair<Condition, Expression>> branches,
                                 Expression otherwise) {
  Piecewise pw;
  pw.branches.reserve(branches.size());
  for (auto& [c, e] : branches) pw.branches.push_back(Branch{c.node_, e.root_});
  pw.otherwise = std::move(otherwise.root_);
  return Expression(make_node(std::move(pw)));
}

Condition Condition::compare(CmpOp op, Expression lhs, Expression rhs) {
  auto n = std::make_shared<CondNode>();
  n->v = Compare{op, std::move(lhs.root_), std::move(rhs.root_)};
  return Condition(std::move(n));
}

Condition Condition::logical_and(Condition lhs, Condition rhs) {
  auto n = std::make_shared<CondNode>();
  n->v = CondAnd{std::move(lhs.node_), std::move(rhs.node_)};
  return Condition(std::move(n));
}

Condition Condition::logical_or(Condition lhs, Condition rhs) {
  auto n = std::make_shared<CondNode>();
  n->v = CondOr{std::move(lhs.node_), std::move(rhs.node_)};
  return Condition(std::move(n));
}

// ---------------------------------------------------------------------------
// point evaluation

namespace {

double eval_node(const Node& n, double t);
bool eval_cond_node(const CondNode& c, double t);

double checked(double r, const char* what) {
  if (std::isnan(r)) throw EvalError(std::string("NaN produced by ") + what);
  return r;
}

double eval_pow(double a, double b) {
  if (std::rint(b) == b && std::abs(b) <= 9e15) {
    long long n = static_cast<long long>(b);
    if (n < 0 && a == 0.0) throw EvalError("zero base raised to a negative power");
    return int_pow(a, n);
  }
  if (a > 0.0) return std::pow(a, b);
  throw EvalError("fractional power of a non-positive base");
}

double eval_node(const Node& n, double t) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [t](const Var&) { return t; },
          [t](const Unary& u) {
            double a = eval_node(*u.arg, t);
            switch (u.op) {
              case UnaryOp::Neg:
                return -a;
              case UnaryOp::Floor:
                return std::floor(a);
              case UnaryOp::Frac:
                return checked(a - std::floor(a), "frac");
              case UnaryOp::Sin:
                return checked(std::sin(a), "sin");
              case UnaryOp::Cos:
                return checked(std::cos(a), "cos");
              case UnaryOp::Exp:
                return std::exp(a);
              case UnaryOp::Abs:
                return std::abs(a);
            }
            throw EvalError("unhandled unary op");
          },
          [t](const Binary& b) {
            double x = eval_node(*b.lhs, t);
            double y = eval_node(*b.rhs, t);
            switch (b.op) {
              case BinaryOp::Add:
                return checked(x + y, "+");
              case BinaryOp::Sub:
                return checked(x - y, "-");
              case BinaryOp::Mul:
                return checked(x * y, "*");
              case BinaryOp::Div:
                if (y == 0.0) throw EvalError("division by zero");
                return checked(x / y, "/");
              case BinaryOp::Pow:
                return checked(eval_pow(x, y), "^");
            }
            throw EvalError("unhandled binary op");
          },
          [t](const Piecewise& pw) {
            for (const auto& br : pw.branches) {
              if (eval_cond_node(*br.cond, t)) return eval_node(*br.value, t);
            }
            return eval_node(*pw.otherwise, t);
          },
      },
      n.v);
}

bool eval_cond_node(const CondNode& c, double t) {
  return std::visit(overloaded{
                        [t](const Compare& cmp) {
                          double l = eval_node(*cmp.lhs, t);
                          double r = eval_node(*cmp.rhs, t);
                          switch (cmp.op) {
                            case CmpOp::Lt:
                              return l < r;
                            case CmpOp::Le:
                              return l <= r;
                            case CmpOp::Gt:
                              return l > r;
                            case CmpOp::Ge:
                              return l >= r;
                          }
                          throw EvalError("unhandled comparison op");
                        },
                        [t](const CondAnd& a) {
                          return eval_cond_node(*a.lhs, t) && eval_cond_node(*a.rhs, t);
                        },
                        [t](const CondOr& o) {
                          return eval_cond_node(*o.lhs, t) || eval_cond_node(*o.rhs, t);
                        },
                    },
                    c.v);
}

}  // namespace

double Expression::eval(double t) const { return eval_node(*root_, t); }

bool Condition::eval(double t) const { return eval_cond_node(*node_, t); }

// ---------------------------------------------------------------------------
// interval evaluation

namespace {

enum class Truth { False, True, Unknown };

Interval eval_node_i(const Node& n, Interval dom);

Truth eval_cond_i(const CondNode& c, Interval dom) {
  return std::visit(
      overloaded{
          [dom](const Compare& cmp) {
            Interval l, r;
            try {
              l = eval_node_i(*cmp.lhs, dom);
              r = eval_node_i(*cmp.rhs, dom);
            } catch (const IntervalError&) {
              return Truth::Unknown;  // guard not decidable on this domain
            }
            switch (cmp.op) {
              case CmpOp::Lt:
                if (l.hi < r.lo) return Truth::True;
                if (l.lo >= r.hi) return Truth::False;
                return Truth::Unknown;
              case CmpOp::Le:
                if (l.hi <= r.lo) return Truth::True;
                if (l.lo > r.hi) return Truth::False;
                return Truth::Unknown;
              case CmpOp::Gt:
                if (l.lo > r.hi) return Truth::True;
                if (l.hi <= r.lo) return Truth::False;
                return Truth::Unknown;
              case CmpOp::Ge:
                if (l.lo >= r.hi) return Truth::True;
                if (l.hi < r.lo) return Truth::False;
                return Truth::Unknown;
            }
            return Truth::Unknown;
          },
          [dom](const CondAnd& a) {
            Truth l = eval_cond_i(*a.lhs, dom), r = eval_cond_i(*a.rhs, dom);
            if (l == Truth::False || r == Truth::False) return Truth::False;
            if (l == Truth::True && r == Truth::True) return Truth::True;
            return Truth::Unknown;
          },
          [dom](const CondOr& o) {
            Truth l = eval_cond_i(*o.lhs, dom), r = eval_cond_i(*o.rhs, dom);
            if (l == Truth::True || r == Truth::True) return Truth::True;
            if (l == Truth::False && r == Truth::False) return Truth::False;
            return Truth::Unknown;
          },
      },
      c.v);
}

Interval eval_node_i(const Node& n, Interval dom) {
  namespace ops = interval_ops;
  return std::visit(
      overloaded{
          [](const Constant& c) { return Interval(c.value); },
          [dom](const Var&) { return dom; },
          [dom](const Unary& u) {
            Interval a = eval_node_i(*u.arg, dom);
            switch (u.op) {
              case UnaryOp::Neg:
                return -a;
              case UnaryOp::Floor:
                return ops::floor(a);
              case UnaryOp::Frac:
                return ops::frac(a);
              case UnaryOp::Sin:
                return ops::sin(a);
              case UnaryOp::Cos:
                return ops::cos(a);
              case UnaryOp::Exp:
                return ops::exp(a);
              case UnaryOp::Abs:
                return ops::abs(a);
            }
            throw IntervalError("unhandled unary op");
          },
          [dom](const Binary& b) {
            Interval x = eval_node_i(*b.lhs, dom);
            Interval y = eval_node_i(*b.rhs, dom);
            switch (b.op) {
              case BinaryOp::Add:
                return x + y;
              case BinaryOp::Sub:
                return x - y;
              case BinaryOp::Mul:
                return x * y;
              case BinaryOp::Div:
                return x / y;
              case BinaryOp::Pow:
                return ops::pow(x, y);
            }
            throw IntervalError("unhandled binary op");
          },
          [dom](const Piecewise& pw) {
            Interval acc;
            bool have = false;
            for (const auto& br : pw.branches) {
              Truth tv = eval_cond_i(*br.cond, dom);
              if (tv != Truth::False) {
                Interval bi = eval_node_i(*br.value, dom);
                acc = have ? hull(acc, bi) : bi;
                have = true;
              }
              // Every point of the domain takes this or an earlier branch.
              if (tv == Truth::True) return acc;
            }
            Interval oi = eval_node_i(*pw.otherwise, dom);
            return have ? hull(acc, oi) : oi;
          },
      },
      n.v);
}

}  // namespace

Interval Expression::eval_interval(Interval domain) const {
  if (domain.lo > domain.hi) throw IntervalError("empty interval domain");
  return eval_node_i(*root_, domain);
}

// ---------------------------------------------------------------------------
// printing
//
// Operator precedence levels used by both printer and parser:
//   1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
// A negative literal prints like a unary minus application, so it gets
// level 3 rather than atom level.

namespace {

int node_prec(const Node& n) {
  return std::visit(overloaded{
                        [](const Constant& c) { return c.value < 0 ? 3 : 5; },
                        [](const Var&) { return 5; },
                        [](const Unary& u) { return u.op == UnaryOp::Neg ? 3 : 5; },
                        [](const Binary& b) {
                          switch (b.op) {
                            case BinaryOp::Add:
                            case BinaryOp::Sub:
                              return 1;
                            case BinaryOp::Mul:
                            case BinaryOp::Div:
                              return 2;
                            case BinaryOp::Pow:
                              return 4;
                          }
                          return 5;
                        },
                        [](const Piecewise&) { return 5; },
                    },
                    n.v);
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg:
      return "-";
    case UnaryOp::Floor:
      return "floor";
    case UnaryOp::Frac:
      return "frac";
    case UnaryOp::Sin:
      return "sin";
    case UnaryOp::Cos:
      return "cos";
    case UnaryOp::Exp:
      return "exp";
    case UnaryOp::Abs:
      return "abs";
  }
  return "?";
}

const char* cmp_name(CmpOp op) {
  switch (op) {
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
  }
  return "?";
}

void print_node(const Node& n, std::ostream& os, int min_prec);
void print_cond(const CondNode& c, std::ostream& os, int min_prec);

void print_node(const Node& n, std::ostream& os, int min_prec) {
  if (node_prec(n) < min_prec) {
    os << '(';
    print_node(n, os, 0);
    os << ')';
    return;
  }
  std::visit(overloaded{
                 [&](const Constant& c) { os << util::fmt_double(c.value); },
                 [&](const Var&) { os << 't'; },
                 [&](const Unary& u) {
                   if (u.op == UnaryOp::Neg) {
                     os << '-';
                     print_node(*u.arg, os, 3);
                   } else {
                     os << unary_name(u.op) << '(';
                     print_node(*u.arg, os, 0);
                     os << ')';
                   }
                 },
                 [&](const Binary& b) {
                   switch (b.op) {
                     case BinaryOp::Add:
                       print_node(*b.lhs, os, 1);
                       os << " + ";
                       print_node(*b.rhs, os, 2);
                       break;
                     case BinaryOp::Sub:
                       print_node(*b.lhs, os, 1);
                       os << " - ";
                       print_node(*b.rhs, os, 2);
                       break;
                     case BinaryOp::Mul:
                       print_node(*b.lhs, os, 2);
                       os << '*';
                       print_node(*b.rhs, os, 3);
                       break;
                     case BinaryOp::Div:
                       print_node(*b.lhs, os, 2);
                       os << '/';
                       print_node(*b.rhs, os, 3);
                       break;
                     case BinaryOp::Pow:
                       print_node(*b.lhs, os, 5);
                       os << '^';
                       print_node(*b.rhs, os, 3);
                       break;
                   }
                 },
                 [&](const Piecewise& pw) {
                   os << "piecewise(";
                   for (const auto& br : pw.branches) {
                     print_cond(*br.cond, os, 0);
                     os << " : ";
                     print_node(*br.value, os, 0);
                     os << " ; ";
                   }
                   os << "otherwise : ";
                   print_node(*pw.otherwise, os, 0);
                   os << ')';
                 },
             },
             n.v);
}

// Condition precedence: 1 or, 2 and, 3 comparison.
int cond_prec(const CondNode& c) {
  return std::visit(overloaded{[](const Compare&) { return 3; },
                               [](const CondAnd&) { return 2; },
                               [](const CondOr&) { return 1; }},
                    c.v);
}

void print_cond(const CondNode& c, std::ostream& os, int min_prec) {
  if (cond_prec(c) < min_prec) {
    os << '(';
    print_cond(c, os, 0);
    os << ')';
    return;
  }
  std::visit(overloaded{
                 [&](const Compare& cmp) {
                   print_node(*cmp.lhs, os, 0);
                   os << ' ' << cmp_name(cmp.op) << ' ';
                   print_node(*cmp.rhs, os, 0);
                 },
                 [&](const CondAnd& a) {
                   print_cond(*a.lhs, os, 2);
                   os << " and ";
                   print_cond(*a.rhs, os, 3);
                 },
                 [&](const CondOr& o) {
                   print_cond(*o.lhs, os, 1);
                   os << " or ";
                   print_cond(*o.rhs, os, 2);
                 },
             },
             c.v);
}

}  // namespace

std::string Expression::str() const {
  std::ostringstream os;
  print_node(*root_, os, 0);
  return os.str();
}

std::string Condition::str() const {
  std::ostringstream os;
  print_cond(*node_, os, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// structural equality

namespace {

bool node_eq(const Node& a, const Node& b);
bool cond_eq(const CondNode& a, const CondNode& b);

bool node_eq(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      overloaded{
          [&](const Constant& ca) { return ca.value == std::get<Constant>(b.v).value; },
          [&](const Var&) { return true; },
          [&](const Unary& ua) {
            const auto& ub = std::get<Unary>(b.v);
            return ua.op == ub.op && node_eq(*ua.arg, *ub.arg);
          },
          [&](const Binary& ba) {
            const auto& bb = std::get<Binary>(b.v);
            return ba.op == bb.op && node_eq(*ba.lhs, *bb.lhs) && node_eq(*ba.rhs, *bb.rhs);
          },
          [&](const Piecewise& pa) {
            const auto& pb = std::get<Piecewise>(b.v);
            if (pa.branches.size() != pb.branches.size()) return false;
            for (std::size_t i = 0; i < pa.branches.size(); ++i) {
              if (!cond_eq(*pa.branches[i].cond, *pb.branches[i].cond)) return false;
              if (!node_eq(*pa.branches[i].value, *pb.branches[i].value)) return false;
            }
            return node_eq(*pa.otherwise, *pb.otherwise);
          },
      },
      a.v);
}

bool cond_eq(const CondNode& a, const CondNode& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(overloaded{
                        [&](const Compare& ca) {
                          const auto& cb = std::get<Compare>(b.v);
                          return ca.op == cb.op && node_eq(*ca.lhs, *cb.lhs) &&
                                 node_eq(*ca.rhs, *cb.rhs);
                        },
                        [&](const CondAnd& aa) {
                          const auto& ab = std::get<CondAnd>(b.v);
                          return cond_eq(*aa.lhs, *ab.lhs) && cond_eq(*aa.rhs, *ab.rhs);
                        },
                        [&](const CondOr& oa) {
                          const auto& ob = std::get<CondOr>(b.v);
                          return cond_eq(*oa.lhs, *ob.lhs) && cond_eq(*oa.rhs, *ob.rhs);
                        },
                    },
                    a.v);
}

}  // namespace

bool Expression::same_structure(const Expression& other) const {
  return node_eq(*root_, *other.root_);
}

bool Condition::same_structure(const Condition& other) const {
  return cond_eq(*node_, *other.node_);
}

}  // namespace ctdde
