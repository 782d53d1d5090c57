#pragma once

// Internal node representation shared by the evaluator and the parser.

#include <memory>
#include <variant>
#include <vector>

#include "ctdde/expr.hpp"

namespace ctdde::detail {

struct Node;
struct CondNode;
using NodePtr = std::shared_ptr<const Node>;
using CondPtr = std::shared_ptr<const CondNode>;

struct Constant {
  double value;
};
struct Var {};
struct Unary {
  UnaryOp op;
  NodePtr arg;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs, rhs;
};
struct Branch {
  CondPtr cond;
  NodePtr value;
};
struct Piecewise {
  std::vector<Branch> branches;
  NodePtr otherwise;
};

struct Node {
  std::variant<Constant, Var, Unary, Binary, Piecewise> v;
};

struct Compare {
  CmpOp op;
  NodePtr lhs, rhs;
};
struct CondAnd {
  CondPtr lhs, rhs;
};
struct CondOr {
  CondPtr lhs, rhs;
};

struct CondNode {
  std::variant<Compare, CondAnd, CondOr> v;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace ctdde::detail
