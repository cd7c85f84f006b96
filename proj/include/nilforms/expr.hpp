#pragma once

// Scalar fields on R^n as immutable expression trees.
//
// Trees are shared (std::shared_ptr<const Node>) and never mutated after
// construction. The builders in namespace `ast` fold constants and absorb
// 0/1 and double negation; nothing else is rewritten, so printed results of
// symbolic differentiation stay recognisable.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nilforms/error.hpp"
#include "nilforms/scalar.hpp"
#include "nilforms/weil.hpp"

namespace nilforms {

/// Numeric literal: exact rational, or a binary64 float literal (only
/// evaluable on the float backend).
struct Literal {
  Rational exact;
  double approx = 0.0;
  bool is_float = false;

  static Literal rational(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return Literal{c, c.get_d(), false};
  }
  static Literal floating(double v) { return Literal{Rational(0), v, true}; }

  bool is_zero() const { return is_float ? approx == 0.0 : sgn(exact) == 0; }
  bool is_one() const { return is_float ? approx == 1.0 : exact == 1; }
  bool is_negative() const { return is_float ? std::signbit(approx) && approx != 0.0 : sgn(exact) < 0; }
  bool is_integer() const { return !is_float && exact.get_den() == 1; }

  friend bool operator==(const Literal& a, const Literal& b) {
    if (a.is_float != b.is_float) return false;
    return a.is_float ? a.approx == b.approx : a.exact == b.exact;
  }
};

enum class Op { constant, variable, add, sub, mul, div, neg, pow, func };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::constant;
  Literal value;                       // constant
  int variable = 0;                    // variable, 1-based
  unsigned exponent = 0;               // pow
  Elementary function = Elementary::sin;  // func
  NodePtr lhs;                         // unary operand / left operand / pow base / func argument
  NodePtr rhs;
};

/// A smooth function R^n -> R given by an expression over x1..xn.
struct ScalarField {
  int dim = 0;
  NodePtr root;
};

namespace ast {

inline NodePtr constant(const Literal& v) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = v;
  return n;
}
inline NodePtr constant(long v) { return constant(Literal::rational(Rational(v))); }
inline NodePtr constant(const Rational& v) { return constant(Literal::rational(v)); }

inline NodePtr variable(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->variable = index;
  return n;
}

inline NodePtr raw_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
inline NodePtr raw_neg(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = Op::neg;
  n->lhs = std::move(a);
  return n;
}
inline NodePtr raw_pow(NodePtr base, unsigned k) {
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->lhs = std::move(base);
  n->exponent = k;
  return n;
}
inline NodePtr raw_func(Elementary f, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::func;
  n->function = f;
  n->lhs = std::move(arg);
  return n;
}

inline bool is_constant(const NodePtr& n) { return n->op == Op::constant; }
inline bool is_zero(const NodePtr& n) { return is_constant(n) && n->value.is_zero(); }
inline bool is_one(const NodePtr& n) { return is_constant(n) && n->value.is_one(); }

namespace detail {
template <class ExactOp, class FloatOp>
Literal fold(const Literal& a, const Literal& b, ExactOp exact, FloatOp approx) {
  if (!a.is_float && !b.is_float) return Literal::rational(exact(a.exact, b.exact));
  return Literal::floating(approx(a.approx, b.approx));
}
}  // namespace detail

inline NodePtr negate(NodePtr a) {
  if (is_constant(a)) {
    const Literal& v = a->value;
    return constant(v.is_float ? Literal::floating(-v.approx) : Literal::rational(-v.exact));
  }
  if (a->op == Op::neg) return a->lhs;
  return raw_neg(std::move(a));
}

inline NodePtr sum(NodePtr a, NodePtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_constant(a) && is_constant(b))
    return constant(detail::fold(a->value, b->value, [](const Rational& x, const Rational& y) { return Rational(x + y); },
                                 [](double x, double y) { return x + y; }));
  if (b->op == Op::neg) return raw_binary(Op::sub, std::move(a), b->lhs);
  return raw_binary(Op::add, std::move(a), std::move(b));
}

inline NodePtr difference(NodePtr a, NodePtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return negate(std::move(b));
  if (is_constant(a) && is_constant(b))
    return constant(detail::fold(a->value, b->value, [](const Rational& x, const Rational& y) { return Rational(x - y); },
                                 [](double x, double y) { return x - y; }));
  if (b->op == Op::neg) return raw_binary(Op::add, std::move(a), b->lhs);
  return raw_binary(Op::sub, std::move(a), std::move(b));
}

inline NodePtr product(NodePtr a, NodePtr b) {
  if (is_zero(a) || is_zero(b)) return constant(0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (is_constant(a) && is_constant(b))
    return constant(detail::fold(a->value, b->value, [](const Rational& x, const Rational& y) { return Rational(x * y); },
                                 [](double x, double y) { return x * y; }));
  return raw_binary(Op::mul, std::move(a), std::move(b));
}

inline NodePtr quotient(NodePtr a, NodePtr b) {
  if (is_one(b)) return a;
  if (is_zero(a) && !is_zero(b)) return constant(0);
  if (is_constant(a) && is_constant(b) && !b->value.is_zero())
    return constant(detail::fold(a->value, b->value, [](const Rational& x, const Rational& y) { return Rational(x / y); },
                                 [](double x, double y) { return x / y; }));
  return raw_binary(Op::div, std::move(a), std::move(b));
}

inline NodePtr power(NodePtr base, unsigned k) {
  if (k == 0) return constant(1);
  if (k == 1) return base;
  if (is_constant(base)) {
    const Literal& v = base->value;
    if (v.is_float) return constant(Literal::floating(std::pow(v.approx, static_cast<double>(k))));
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), v.exact.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), v.exact.get_den_mpz_t(), k);
    return constant(Rational(num, den));
  }
  return raw_pow(std::move(base), k);
}

inline NodePtr apply(Elementary f, NodePtr arg) { return raw_func(f, std::move(arg)); }

}  // namespace ast

/// Structural equality of expression trees.
inline bool same_tree(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  switch (a->op) {
    case Op::constant: return a->value == b->value;
    case Op::variable: return a->variable == b->variable;
    case Op::neg: return same_tree(a->lhs, b->lhs);
    case Op::pow: return a->exponent == b->exponent && same_tree(a->lhs, b->lhs);
    case Op::func: return a->function == b->function && same_tree(a->lhs, b->lhs);
    default: return same_tree(a->lhs, b->lhs) && same_tree(a->rhs, b->rhs);
  }
}

inline bool operator==(const ScalarField& a, const ScalarField& b) {
  return a.dim == b.dim && same_tree(a.root, b.root);
}

/// Largest variable index used, 0 for constants.
inline int max_variable(const NodePtr& n) {
  if (!n) return 0;
  if (n->op == Op::variable) return n->variable;
  return std::max(max_variable(n->lhs), max_variable(n->rhs));
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string variable_name(int i, int dim) {
  if (dim <= 3) return std::string(1, "xyz"[i - 1]);
  return "x" + std::to_string(i);
}

inline std::string literal_text(const Literal& v) {
  if (v.is_float) {
    std::string s = ScalarTraits<double>::to_string(v.approx);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  }
  return v.exact.get_str();
}

// 1: sums, 2: products and quotients, 3: unary minus, 4: powers, 5: atoms.
inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    case Op::constant:
      if (!n.value.is_float && !n.value.is_integer()) return 2;
      return n.value.is_negative() ? 3 : 5;
    default: return 5;
  }
}

inline bool leads_with_minus(const Node& n) {
  if (n.op == Op::neg) return true;
  if (n.op == Op::constant) return n.value.is_negative();
  if (n.op == Op::add || n.op == Op::sub || n.op == Op::mul || n.op == Op::div) return leads_with_minus(*n.lhs);
  return false;
}

inline void print(const Node& n, int dim, std::string& out);

inline void print_child(const Node& child, int dim, bool parens, std::string& out) {
  if (parens) out += '(';
  print(child, dim, out);
  if (parens) out += ')';
}

inline void print(const Node& n, int dim, std::string& out) {
  switch (n.op) {
    case Op::constant: out += literal_text(n.value); return;
    case Op::variable: out += variable_name(n.variable, dim); return;
    case Op::neg:
      out += '-';
      print_child(*n.lhs, dim, precedence(*n.lhs) < 3 || leads_with_minus(*n.lhs), out);
      return;
    case Op::pow:
      print_child(*n.lhs, dim, precedence(*n.lhs) < 5, out);
      out += "**" + std::to_string(n.exponent);
      return;
    case Op::func:
      out += elementary_name(n.function);
      out += '(';
      print(*n.lhs, dim, out);
      out += ')';
      return;
    default: {
      const int p = precedence(n);
      const char* sym = n.op == Op::add ? " + " : n.op == Op::sub ? " - " : n.op == Op::mul ? "*" : "/";
      print_child(*n.lhs, dim, precedence(*n.lhs) < p, out);
      out += sym;
      print_child(*n.rhs, dim, precedence(*n.rhs) <= p || leads_with_minus(*n.rhs), out);
      return;
    }
  }
}

}  // namespace detail

/// Canonical text. Uses x, y, z when dim <= 3, else x1..xn. Reparses to a
/// structurally identical tree.
inline std::string to_string(const ScalarField& f) {
  std::string out;
  detail::print(*f.root, f.dim, out);
  return out;
}

inline std::string to_string(const NodePtr& n, int dim) {
  std::string out;
  detail::print(*n, dim, out);
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation

inline NodePtr diff_node(const NodePtr& n, int i) {
  using namespace ast;
  switch (n->op) {
    case Op::constant: return constant(0);
    case Op::variable: return constant(n->variable == i ? 1 : 0);
    case Op::add: return sum(diff_node(n->lhs, i), diff_node(n->rhs, i));
    case Op::sub: return difference(diff_node(n->lhs, i), diff_node(n->rhs, i));
    case Op::neg: return negate(diff_node(n->lhs, i));
    case Op::mul:
      return sum(product(diff_node(n->lhs, i), n->rhs), product(n->lhs, diff_node(n->rhs, i)));
    case Op::div: {
      NodePtr da = diff_node(n->lhs, i), db = diff_node(n->rhs, i);
      if (is_zero(db)) return quotient(da, n->rhs);
      return quotient(difference(product(da, n->rhs), product(n->lhs, db)), power(n->rhs, 2));
    }
    case Op::pow: {
      NodePtr du = diff_node(n->lhs, i);
      NodePtr outer = product(constant(static_cast<long>(n->exponent)), power(n->lhs, n->exponent - 1));
      return product(outer, du);
    }
    case Op::func: {
      NodePtr du = diff_node(n->lhs, i);
      if (is_zero(du)) return constant(0);
      const NodePtr& u = n->lhs;
      switch (n->function) {
        case Elementary::sin: return product(apply(Elementary::cos, u), du);
        case Elementary::cos: return product(negate(apply(Elementary::sin, u)), du);
        case Elementary::exp: return product(apply(Elementary::exp, u), du);
        case Elementary::ln: return quotient(du, u);
        case Elementary::sqrt: return quotient(du, product(constant(2), apply(Elementary::sqrt, u)));
      }
    }
  }
  return ast::constant(0);
}

/// Partial derivative with respect to x_i by the usual recursive rules.
inline ScalarField diff_symbolic(const ScalarField& f, int i) {
  if (i < 1 || i > f.dim)
    throw DimensionError("partial derivative index " + std::to_string(i) + " outside 1.." + std::to_string(f.dim));
  return ScalarField{f.dim, diff_node(f.root, i)};
}

// ---------------------------------------------------------------------------
// Evaluation over scalar and Weil carriers

template <class C>
struct Carrier;

template <Scalar S>
struct Carrier<S> {
  using scalar_type = S;

  static S constant(const Literal& v, const S&) {
    if constexpr (ScalarTraits<S>::exact) {
      if (v.is_float) throw DomainError("float literal " + detail::literal_text(v) + " cannot be evaluated on the rational backend");
      return v.exact;
    } else {
      return v.is_float ? v.approx : v.exact.get_d();
    }
  }
  static S divide(const S& a, const S& b) {
    if (ScalarTraits<S>::is_zero(b)) throw DomainError("division by zero");
    return a / b;
  }
  static S integer_power(const S& a, unsigned k) {
    S r(1);
    for (unsigned j = 0; j < k; ++j) r *= a;
    return r;
  }
  static S function(Elementary f, const S& a) {
    if constexpr (!ScalarTraits<S>::exact) {
      if (f == Elementary::ln && !(a > 0)) throw DomainError("ln of nonpositive value " + ScalarTraits<S>::to_string(a));
      if (f == Elementary::sqrt && !(a >= 0)) throw DomainError("sqrt of negative value " + ScalarTraits<S>::to_string(a));
    }
    return elementary_derivative<S>(f, 0, a);
  }
};

template <Scalar S>
struct Carrier<Weil<S>> {
  using scalar_type = S;

  static Weil<S> constant(const Literal& v, const Weil<S>& like) {
    return Weil<S>::constant(Carrier<S>::constant(v, S(0)), like.generators());
  }
  static Weil<S> divide(const Weil<S>& a, const Weil<S>& b) { return a * reciprocal(b); }
  static Weil<S> integer_power(const Weil<S>& a, unsigned k) { return a.pow(k); }
  static Weil<S> function(Elementary f, const Weil<S>& a) { return lift(f, a); }
};

template <class C>
C eval_node(const Node& n, std::span<const C> point) {
  using Ops = Carrier<C>;
  switch (n.op) {
    case Op::constant: return Ops::constant(n.value, point.front());
    case Op::variable: return point[n.variable - 1];
    case Op::add: return eval_node<C>(*n.lhs, point) + eval_node<C>(*n.rhs, point);
    case Op::sub: return eval_node<C>(*n.lhs, point) - eval_node<C>(*n.rhs, point);
    case Op::mul: return eval_node<C>(*n.lhs, point) * eval_node<C>(*n.rhs, point);
    case Op::div: return Ops::divide(eval_node<C>(*n.lhs, point), eval_node<C>(*n.rhs, point));
    case Op::neg: return C(-eval_node<C>(*n.lhs, point));
    case Op::pow: return Ops::integer_power(eval_node<C>(*n.lhs, point), n.exponent);
    case Op::func: return Ops::function(n.function, eval_node<C>(*n.lhs, point));
  }
  throw Error("corrupt expression node");
}

/// Evaluates f at a point whose coordinates are reals, rationals or Weil
/// elements (one algebra for all coordinates).
template <class C>
C eval_field(const ScalarField& f, std::span<const C> point) {
  if (static_cast<int>(point.size()) != f.dim)
    throw DimensionError("point has " + std::to_string(point.size()) + " coordinates, field lives on R^" + std::to_string(f.dim));
  if (point.empty()) throw DimensionError("cannot evaluate on R^0");
  return eval_node<C>(*f.root, point);
}

template <class C>
C eval_field(const ScalarField& f, const std::vector<C>& point) {
  return eval_field<C>(f, std::span<const C>(point));
}

}  // namespace nilforms
