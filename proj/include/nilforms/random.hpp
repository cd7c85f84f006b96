#pragma once

// Random fields, forms, points and tangents for property checks.
//
// Polynomials have rational coefficients in [-9, 9] and total degree <= 4, so
// exact runs stay fast. The transcendental pool adds terms c * f(u) with f one
// of sin, cos, exp and u a unit-scale linear form.

#include <cstdint>
#include <random>
#include <vector>

#include "nilforms/alternating.hpp"
#include "nilforms/expr.hpp"
#include "nilforms/forms.hpp"

namespace nilforms {

enum class FieldPool { polynomial, transcendental };

using Rng = std::mt19937_64;

/// Independent stream per (seed, tags...), so trials do not depend on order.
template <class... Tags>
Rng split_rng(std::uint64_t seed, Tags... tags) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(tags)...};
  return Rng(seq);
}

/// p/q with q in 1..3 and |p/q| <= bound.
inline Rational random_rational(Rng& rng, int bound = 9) {
  std::uniform_int_distribution<int> den(1, 3);
  const int q = den(rng);
  std::uniform_int_distribution<int> num(-bound * q, bound * q);
  Rational r(num(rng), q);
  r.canonicalize();
  return r;
}

inline NodePtr random_monomial(int n, int max_degree, Rng& rng) {
  std::uniform_int_distribution<int> deg(0, max_degree), var(1, n);
  std::vector<unsigned> exponents(n, 0);
  for (int d = deg(rng); d > 0; --d) ++exponents[var(rng) - 1];
  NodePtr m = ast::constant(1);
  for (int i = 0; i < n; ++i)
    if (exponents[i]) m = ast::product(m, ast::power(ast::variable(i + 1), exponents[i]));
  return m;
}

inline NodePtr random_polynomial_node(int n, Rng& rng, int max_terms = 4, int max_degree = 4) {
  std::uniform_int_distribution<int> count(1, max_terms);
  NodePtr p = ast::constant(0);
  for (int t = count(rng); t > 0; --t) {
    Rational c = random_rational(rng);
    if (sgn(c) == 0) continue;
    p = ast::sum(p, ast::product(ast::constant(c), random_monomial(n, max_degree, rng)));
  }
  return p;
}

/// a x_i + b x_j + c with small rational a, b, c.
inline NodePtr random_unit_argument(int n, Rng& rng) {
  std::uniform_int_distribution<int> var(1, n);
  NodePtr u = ast::product(ast::constant(random_rational(rng, 1)), ast::variable(var(rng)));
  u = ast::sum(u, ast::product(ast::constant(random_rational(rng, 1)), ast::variable(var(rng))));
  return ast::sum(u, ast::constant(random_rational(rng, 1)));
}

inline ScalarField random_field(int n, Rng& rng, FieldPool pool = FieldPool::polynomial) {
  NodePtr p = random_polynomial_node(n, rng);
  if (pool == FieldPool::transcendental) {
    std::uniform_int_distribution<int> which(0, 2), terms(1, 2);
    const Elementary fs[3] = {Elementary::sin, Elementary::cos, Elementary::exp};
    for (int t = terms(rng); t > 0; --t) {
      NodePtr term = ast::apply(fs[which(rng)], random_unit_argument(n, rng));
      term = ast::product(ast::product(ast::constant(random_rational(rng, 3)), random_monomial(n, 2, rng)), term);
      p = ast::sum(p, term);
    }
  }
  return ScalarField{n, p};
}

/// Random k-form; each coefficient is zero with probability 1/4.
inline DifferentialForm random_form(int n, int k, Rng& rng, FieldPool pool = FieldPool::polynomial) {
  DifferentialForm w(n, k);
  std::uniform_int_distribution<int> skip(0, 3);
  for (const auto& idx : increasing_indices(n, k))
    if (skip(rng) != 0) w.set(idx, random_field(n, rng, pool));
  return w;
}

/// Random point: rationals in [-2, 2] on the exact backend, uniform reals on floats.
template <Scalar S>
Vector<S> random_point(int n, Rng& rng) {
  Vector<S> v(n);
  for (auto& x : v) {
    if constexpr (ScalarTraits<S>::exact) {
      x = random_rational(rng, 2);
    } else {
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      x = u(rng);
    }
  }
  return v;
}

template <Scalar S>
std::vector<Vector<S>> random_tangents(int n, int count, Rng& rng) {
  std::vector<Vector<S>> out;
  for (int j = 0; j < count; ++j) out.push_back(random_point<S>(n, rng));
  return out;
}

}  // namespace nilforms
