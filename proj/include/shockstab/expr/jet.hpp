#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "shockstab/errors.hpp"
#include "shockstab/expr/ast.hpp"
#include "shockstab/types.hpp"

namespace shockstab::expr {

/// Symmetric matrix storing only the upper triangle (row-major packing), so
/// Hessians are symmetric by construction.
class SymMatrix {
public:
  explicit SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {}

  int size() const { return n_; }

  double operator()(int i, int j) const { return a_[index(i, j)]; }
  double& at(int i, int j) { return a_[index(i, j)]; }

  SymMatrix& operator+=(const SymMatrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  SymMatrix& operator*=(double c) {
    for (double& x : a_) x *= c;
    return *this;
  }
  // adds c * (g h^T + h g^T), keeping symmetry structural
  void add_symmetric_outer(const Vec& g, const Vec& h, double c) {
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) at(i, j) += c * (g[i] * h[j] + h[i] * g[j]);
  }
  void add_scaled_outer(const Vec& g, double c) {
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) at(i, j) += c * g[i] * g[j];
  }

  Mat to_matrix() const {
    Mat m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(std::min(i, j), std::max(i, j));
    return m;
  }

private:
  std::size_t index(int i, int j) const {
    // upper triangle, i <= j
    return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i - 1) / 2 +
           (j - i);
  }
  int n_;
  std::vector<double> a_;
};

/// Second-order forward-mode value: f, grad f, hess f propagated together.
struct JetValue {
  double value = 0.0;
  Vec gradient;
  SymMatrix hessian;

  explicit JetValue(int n) : gradient(Vec::Zero(n)), hessian(n) {}
};

using ParamMap = std::map<std::string, double>;

namespace detail {

inline JetValue jet_constant(double v, int n) {
  JetValue j(n);
  j.value = v;
  return j;
}

inline JetValue jet_variable(int index, const Vec& state) {
  JetValue j(static_cast<int>(state.size()));
  j.value = state[index];
  j.gradient[index] = 1.0;
  return j;
}

// y = phi(f): grad y = phi' grad f, hess y = phi' hess f + phi'' grad f grad f^T
inline JetValue jet_chain(const JetValue& a, double v, double d1, double d2) {
  JetValue j(static_cast<int>(a.gradient.size()));
  j.value = v;
  j.gradient = d1 * a.gradient;
  j.hessian = a.hessian;
  j.hessian *= d1;
  j.hessian.add_scaled_outer(a.gradient, d2);
  return j;
}

inline JetValue jet_add(const JetValue& a, const JetValue& b, double sb) {
  JetValue j(static_cast<int>(a.gradient.size()));
  j.value = a.value + sb * b.value;
  j.gradient = a.gradient + sb * b.gradient;
  j.hessian = a.hessian;
  SymMatrix hb = b.hessian;
  hb *= sb;
  j.hessian += hb;
  return j;
}

inline JetValue jet_mul(const JetValue& a, const JetValue& b) {
  JetValue j(static_cast<int>(a.gradient.size()));
  j.value = a.value * b.value;
  j.gradient = a.value * b.gradient + b.value * a.gradient;
  j.hessian = a.hessian;
  j.hessian *= b.value;
  SymMatrix hb = b.hessian;
  hb *= a.value;
  j.hessian += hb;
  j.hessian.add_symmetric_outer(a.gradient, b.gradient, 1.0);
  return j;
}

inline double eval_scalar(const NodePtr& node, const Vec& state, const ParamMap& params);

inline double integer_pow(double base, long long e) {
  if (e < 0) return 1.0 / integer_pow(base, -e);
  double r = 1.0, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline JetValue jet_pow(const JetValue& a, double c, const NodePtr& origin) {
  const double x = a.value;
  double v, d1, d2;
  const double rounded = std::nearbyint(c);
  const bool integral = std::abs(c - rounded) < 1e-12 && std::abs(c) < 1e15;
  if (x > 0.0) {
    v = std::pow(x, c);
    d1 = c * std::pow(x, c - 1.0);
    d2 = c * (c - 1.0) * std::pow(x, c - 2.0);
  } else if (x < 0.0 && integral) {
    const long long e = static_cast<long long>(rounded);
    v = integer_pow(x, e);
    d1 = c * integer_pow(x, e - 1);
    d2 = c * (c - 1.0) * integer_pow(x, e - 2);
  } else if (x == 0.0 && integral && rounded >= 0.0) {
    const long long e = static_cast<long long>(rounded);
    v = (e == 0) ? 1.0 : 0.0;
    d1 = (e == 1) ? c : 0.0;
    d2 = (e == 2) ? c * (c - 1.0) : 0.0;
  } else {
    throw EvalError("power with base " + std::to_string(x) + " undefined in '" +
                    to_string(origin) + "'");
  }
  return jet_chain(a, v, d1, d2);
}

inline JetValue eval_node(const NodePtr& node, const Vec& state, const ParamMap& params) {
  const int n = static_cast<int>(state.size());
  switch (node->kind) {
    case NodeKind::Constant: return jet_constant(node->value, n);
    case NodeKind::Variable:
      if (node->index >= n)
        throw EvalError("state reference '" + node->name + "' out of range");
      return jet_variable(node->index, state);
    case NodeKind::Parameter: {
      auto it = params.find(node->name);
      if (it == params.end()) throw EvalError("unbound parameter '" + node->name + "'");
      return jet_constant(it->second, n);
    }
    case NodeKind::Neg: {
      JetValue a = eval_node(node->lhs, state, params);
      return jet_chain(a, -a.value, -1.0, 0.0);
    }
    case NodeKind::Exp: {
      JetValue a = eval_node(node->lhs, state, params);
      const double e = std::exp(a.value);
      return jet_chain(a, e, e, e);
    }
    case NodeKind::Log: {
      JetValue a = eval_node(node->lhs, state, params);
      if (!(a.value > 0.0))
        throw EvalError("log of nonpositive value in '" + to_string(node) + "'");
      return jet_chain(a, std::log(a.value), 1.0 / a.value, -1.0 / (a.value * a.value));
    }
    case NodeKind::Sqrt: {
      JetValue a = eval_node(node->lhs, state, params);
      if (!(a.value > 0.0))
        throw EvalError("sqrt of nonpositive value in '" + to_string(node) + "'");
      const double r = std::sqrt(a.value);
      return jet_chain(a, r, 0.5 / r, -0.25 / (r * a.value));
    }
    case NodeKind::Pow: {
      if (contains_variable(node->rhs))
        throw EvalError("exponent must be constant in '" + to_string(node) + "'");
      JetValue a = eval_node(node->lhs, state, params);
      return jet_pow(a, eval_scalar(node->rhs, state, params), node);
    }
    case NodeKind::Add:
      return jet_add(eval_node(node->lhs, state, params),
                     eval_node(node->rhs, state, params), 1.0);
    case NodeKind::Sub:
      return jet_add(eval_node(node->lhs, state, params),
                     eval_node(node->rhs, state, params), -1.0);
    case NodeKind::Mul:
      return jet_mul(eval_node(node->lhs, state, params),
                     eval_node(node->rhs, state, params));
    case NodeKind::Div: {
      JetValue b = eval_node(node->rhs, state, params);
      if (b.value == 0.0)
        throw EvalError("division by zero in '" + to_string(node) + "'");
      const double inv = 1.0 / b.value;
      JetValue rb = jet_chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
      return jet_mul(eval_node(node->lhs, state, params), rb);
    }
  }
  throw EvalError("corrupt expression node");
}

// Plain value evaluation, no derivative bookkeeping.
inline double eval_scalar(const NodePtr& node, const Vec& state, const ParamMap& params) {
  switch (node->kind) {
    case NodeKind::Constant: return node->value;
    case NodeKind::Variable:
      if (node->index >= state.size())
        throw EvalError("state reference '" + node->name + "' out of range");
      return state[node->index];
    case NodeKind::Parameter: {
      auto it = params.find(node->name);
      if (it == params.end()) throw EvalError("unbound parameter '" + node->name + "'");
      return it->second;
    }
    case NodeKind::Neg: return -eval_scalar(node->lhs, state, params);
    case NodeKind::Exp: return std::exp(eval_scalar(node->lhs, state, params));
    case NodeKind::Log: {
      const double x = eval_scalar(node->lhs, state, params);
      if (!(x > 0.0))
        throw EvalError("log of nonpositive value in '" + to_string(node) + "'");
      return std::log(x);
    }
    case NodeKind::Sqrt: {
      const double x = eval_scalar(node->lhs, state, params);
      if (!(x > 0.0))
        throw EvalError("sqrt of nonpositive value in '" + to_string(node) + "'");
      return std::sqrt(x);
    }
    case NodeKind::Pow: {
      const double x = eval_scalar(node->lhs, state, params);
      const double c = eval_scalar(node->rhs, state, params);
      const double rounded = std::nearbyint(c);
      const bool integral = std::abs(c - rounded) < 1e-12 && std::abs(c) < 1e15;
      if (x > 0.0) return std::pow(x, c);
      if (x < 0.0 && integral) return integer_pow(x, static_cast<long long>(rounded));
      if (x == 0.0 && integral && rounded >= 0.0) return rounded == 0.0 ? 1.0 : 0.0;
      throw EvalError("power with base " + std::to_string(x) + " undefined in '" +
                      to_string(node) + "'");
    }
    case NodeKind::Add:
      return eval_scalar(node->lhs, state, params) + eval_scalar(node->rhs, state, params);
    case NodeKind::Sub:
      return eval_scalar(node->lhs, state, params) - eval_scalar(node->rhs, state, params);
    case NodeKind::Mul:
      return eval_scalar(node->lhs, state, params) * eval_scalar(node->rhs, state, params);
    case NodeKind::Div: {
      const double b = eval_scalar(node->rhs, state, params);
      if (b == 0.0)
        throw EvalError("division by zero in '" + to_string(node) + "'");
      return eval_scalar(node->lhs, state, params) / b;
    }
  }
  throw EvalError("corrupt expression node");
}

}  // namespace detail

/// Exact value, gradient, and Hessian by second-order forward-mode
/// differentiation; no finite differencing anywhere.
inline JetValue eval_jet(const ExprAst& ast, const Vec& state, const ParamMap& params = {}) {
  if (state.size() != ast.arity)
    throw EvalError("eval_jet: state dimension " + std::to_string(state.size()) +
                    " does not match expression arity " + std::to_string(ast.arity));
  return detail::eval_node(ast.root, state, params);
}

inline double eval_value(const ExprAst& ast, const Vec& state, const ParamMap& params = {}) {
  if (state.size() != ast.arity)
    throw EvalError("eval_value: state dimension " + std::to_string(state.size()) +
                    " does not match expression arity " + std::to_string(ast.arity));
  return detail::eval_scalar(ast.root, state, params);
}

}  // namespace shockstab::expr
