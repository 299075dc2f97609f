#pragma once

// Expression language for fundamental functions, warp functions and
// potentials.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' literal)*          literal: optionally signed number
//   primary := number | variable | func '(' expr ')' | '(' expr ')'
//
// Variables are x1..xn, y1..yn, u1..um, v1..vm (1-based) and, when enabled,
// the single variable t. Functions: exp, log, sqrt, sin, cos.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "indicatrix/error.hpp"
#include "indicatrix/jet.hpp"

namespace indicatrix {

enum class VarKind { x, y, u, v, t };

struct VarRef {
  VarKind kind;
  int index;  // 0-based

  bool operator==(const VarRef&) const = default;
};

/// Declared variable space of an expression.
struct Dims {
  int n = 0;
  int m = 0;
  bool allow_t = false;
};

enum class Function { exp, log, sqrt, sin, cos };

const char* function_name(Function f);

/// Values bound to the variables of an expression. Unused spans may be empty.
template <class T>
struct Env {
  std::span<const T> x;
  std::span<const T> y;
  std::span<const T> u;
  std::span<const T> v;
  const T* t = nullptr;
};

class Expr {
 public:
  struct Node {
    enum class Kind { number, variable, negate, add, sub, mul, div, power, call };

    Kind kind;
    double number = 0.0;  // literal value, or the exponent of `power`
    VarRef var{VarKind::x, 0};
    Function fn = Function::exp;
    std::shared_ptr<const Node> lhs;  // operand of negate / call / power
    std::shared_ptr<const Node> rhs;
    std::size_t offset = 0;
  };

  static Expr parse(std::string_view text, Dims dims);
  static Expr constant(double value);

  /// Canonical text; parses back to a structurally equal tree.
  std::string print() const;

  /// Structural equality (source offsets ignored).
  bool operator==(const Expr& other) const;

  /// Highest 1-based index referenced per kind (0 when unused), and whether
  /// t appears.
  struct Usage {
    int x = 0, y = 0, u = 0, v = 0;
    bool t = false;
  };
  Usage usage() const;

  template <class T>
  T evaluate(const Env<T>& env) const {
    return eval_node(*root_, env);
  }

  const Node& root() const { return *root_; }

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  template <class T>
  static T eval_node(const Node& n, const Env<T>& env);

  std::shared_ptr<const Node> root_;
};

namespace detail {

inline double checked_apply(Function f, double a) {
  switch (f) {
    case Function::exp:
      return std::exp(a);
    case Function::log:
      if (!(a > 0.0)) throw DomainError("log", a);
      return std::log(a);
    case Function::sqrt:
      if (!(a > 0.0)) throw DomainError("sqrt", a);
      return std::sqrt(a);
    case Function::sin:
      return std::sin(a);
    case Function::cos:
      return std::cos(a);
  }
  return 0.0;
}

template <class T>
Jet<T> checked_apply(Function f, const Jet<T>& a) {
  switch (f) {
    case Function::exp:
      return exp(a);
    case Function::log:
      return log(a);
    case Function::sqrt:
      return sqrt(a);
    case Function::sin:
      return sin(a);
    case Function::cos:
      return cos(a);
  }
  return a;
}

inline double checked_pow(double a, double p) {
  const bool integral = p == std::floor(p);
  if (!integral && !(a > 0.0)) throw DomainError("pow", a);
  if (integral && p < 0.0 && a == 0.0) throw DomainError("pow", a);
  return std::pow(a, p);
}

template <class T>
Jet<T> checked_pow(const Jet<T>& a, double p) {
  return pow(a, p);
}

inline double checked_div(double a, double b) {
  if (b == 0.0) throw DomainError("div", b);
  return a / b;
}

template <class T>
Jet<T> checked_div(const Jet<T>& a, const Jet<T>& b) {
  return a / b;
}

template <class T>
const T& lookup(std::span<const T> values, int index, const char* name) {
  if (index >= static_cast<int>(values.size()))
    throw Error(std::string("expression variable ") + name + std::to_string(index + 1) + " is not bound");
  return values[index];
}

}  // namespace detail

template <class T>
T Expr::eval_node(const Node& n, const Env<T>& env) {
  using K = Node::Kind;
  try {
    switch (n.kind) {
      case K::number:
        return T(n.number);
      case K::variable:
        switch (n.var.kind) {
          case VarKind::x:
            return detail::lookup(env.x, n.var.index, "x");
          case VarKind::y:
            return detail::lookup(env.y, n.var.index, "y");
          case VarKind::u:
            return detail::lookup(env.u, n.var.index, "u");
          case VarKind::v:
            return detail::lookup(env.v, n.var.index, "v");
          case VarKind::t:
            if (!env.t) throw Error("expression variable t is not bound");
            return *env.t;
        }
        break;
      case K::negate:
        return -eval_node(*n.lhs, env);
      case K::add:
        return eval_node(*n.lhs, env) + eval_node(*n.rhs, env);
      case K::sub:
        return eval_node(*n.lhs, env) - eval_node(*n.rhs, env);
      case K::mul:
        return eval_node(*n.lhs, env) * eval_node(*n.rhs, env);
      case K::div:
        return detail::checked_div(eval_node(*n.lhs, env), eval_node(*n.rhs, env));
      case K::power:
        return detail::checked_pow(eval_node(*n.lhs, env), n.number);
      case K::call:
        return detail::checked_apply(n.fn, eval_node(*n.lhs, env));
    }
  } catch (const DomainError& e) {
    throw EvalError(std::string(e.what()), n.offset);
  }
  return T(0.0);
}

/// Evaluate on jets; derivatives flow through the Taylor arithmetic.
inline JetD eval_jet(const Expr& e, const Env<JetD>& env) { return e.evaluate(env); }

}  // namespace indicatrix
