#pragma once

#include <memory>
#include <sstream>
#include <string>

namespace shockstab::expr {

enum class NodeKind {
  Constant,
  Variable,   // state component, 0-based index
  Parameter,  // named scalar bound at evaluation time
  Neg,
  Exp,
  Log,
  Sqrt,
  Pow,  // lhs ^ rhs, rhs must be state-free
  Add,
  Sub,
  Mul,
  Div,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  double value = 0.0;  // Constant
  int index = -1;      // Variable
  std::string name;    // Variable display name / Parameter name
  NodePtr lhs, rhs;
};

struct ExprAst {
  NodePtr root;
  int arity = 0;  // number of state components the expression may reference
};

inline NodePtr make_constant(double v) {
  return std::make_shared<Node>(Node{NodeKind::Constant, v, -1, {}, nullptr, nullptr});
}
inline NodePtr make_variable(int index, std::string name) {
  return std::make_shared<Node>(
      Node{NodeKind::Variable, 0.0, index, std::move(name), nullptr, nullptr});
}
inline NodePtr make_parameter(std::string name) {
  return std::make_shared<Node>(
      Node{NodeKind::Parameter, 0.0, -1, std::move(name), nullptr, nullptr});
}
inline NodePtr make_unary(NodeKind kind, NodePtr child) {
  return std::make_shared<Node>(Node{kind, 0.0, -1, {}, std::move(child), nullptr});
}
inline NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  return std::make_shared<Node>(Node{kind, 0.0, -1, {}, std::move(lhs), std::move(rhs)});
}

inline bool contains_variable(const NodePtr& node) {
  if (!node) return false;
  if (node->kind == NodeKind::Variable) return true;
  return contains_variable(node->lhs) || contains_variable(node->rhs);
}

inline bool tree_equal(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Constant: return a->value == b->value;
    case NodeKind::Variable: return a->index == b->index && a->name == b->name;
    case NodeKind::Parameter: return a->name == b->name;
    default: return tree_equal(a->lhs, b->lhs) && tree_equal(a->rhs, b->rhs);
  }
}

inline bool tree_equal(const ExprAst& a, const ExprAst& b) {
  return a.arity == b.arity && tree_equal(a.root, b.root);
}

namespace detail {

// Precedence levels: +- (1) < */ (2) < ^ (3) < unary minus (4) < atoms (5).
inline int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Pow: return 3;
    case NodeKind::Neg: return 4;
    default: return 5;
  }
}

inline std::string format_constant(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void print_node(std::ostream& os, const NodePtr& n);

inline void print_child(std::ostream& os, const NodePtr& child, int parent_prec,
                        bool needs_paren_on_equal) {
  const int prec = precedence(child->kind);
  const bool paren = prec < parent_prec || (needs_paren_on_equal && prec == parent_prec);
  if (paren) os << '(';
  print_node(os, child);
  if (paren) os << ')';
}

inline void print_node(std::ostream& os, const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Constant: os << format_constant(n->value); break;
    case NodeKind::Variable: os << n->name; break;
    case NodeKind::Parameter: os << n->name; break;
    case NodeKind::Neg:
      os << '-';
      print_child(os, n->lhs, precedence(NodeKind::Neg), false);
      break;
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sqrt:
      os << (n->kind == NodeKind::Exp ? "exp" : n->kind == NodeKind::Log ? "log" : "sqrt")
         << '(';
      print_node(os, n->lhs);
      os << ')';
      break;
    case NodeKind::Pow:
      // '^' parses right-associatively, so only the base needs parens on ties.
      print_child(os, n->lhs, precedence(NodeKind::Pow), true);
      os << '^';
      print_child(os, n->rhs, precedence(NodeKind::Pow), false);
      break;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      const int prec = precedence(n->kind);
      const char op = n->kind == NodeKind::Add   ? '+'
                      : n->kind == NodeKind::Sub ? '-'
                      : n->kind == NodeKind::Mul ? '*'
                                                 : '/';
      print_child(os, n->lhs, prec, false);
      os << op;
      print_child(os, n->rhs, prec, true);  // left-associative: parens on ties
      break;
    }
  }
}

}  // namespace detail

/// Canonical text form; parsing it back yields an identical tree.
inline std::string to_string(const ExprAst& ast) {
  std::ostringstream os;
  detail::print_node(os, ast.root);
  return os.str();
}

inline std::string to_string(const NodePtr& node) {
  std::ostringstream os;
  detail::print_node(os, node);
  return os.str();
}

}  // namespace shockstab::expr
