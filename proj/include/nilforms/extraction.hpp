#pragma once

// Exterior derivative read off infinitesimal boundary integrals.
//
// For tangents a^1..a^(k+1) at a real point x, the integral of omega over
// d(gamma; e_1..e_(k+1)) collapses to phi(a^1..a^(k+1)) e_1...e_(k+1): every
// lower Weil monomial cancels. phi is skew and (k+1)-linear, and probing it
// with standard basis vectors yields the coefficients of d(omega) at x.

#include <algorithm>
#include <string>

#include "nilforms/alternating.hpp"
#include "nilforms/chains.hpp"
#include "nilforms/error.hpp"
#include "nilforms/forms.hpp"

namespace nilforms {

template <Scalar S>
struct BoundaryIntegral {
  Weil<S> value;       // full Weil element, generators 1..k+1
  S top;               // coefficient on e_1...e_(k+1)
  double lower_order;  // max |coefficient| on every other monomial
};

/// Integral of omega over the boundary of (gamma; e_1..e_(k+1)) with base x.
template <Scalar S>
BoundaryIntegral<S> boundary_integral(const DifferentialForm& w, const Vector<S>& x, const std::vector<Vector<S>>& tangents) {
  const int m = static_cast<int>(tangents.size());
  if (m != w.degree() + 1)
    throw DimensionError("the boundary of a " + std::to_string(m) + "-microcube carries " + std::to_string(m - 1) +
                         "-forms, got a " + std::to_string(w.degree()) + "-form");
  auto cell = marked<S>(x, tangents);
  BoundaryIntegral<S> out{integral_chain(w, boundary(cell), m), S(0), 0.0};
  const Monomial top = Monomial::top(m);
  out.top = out.value.coefficient(top);
  for (const auto& [mono, c] : out.value.terms())
    if (mono != top) out.lower_order = std::max(out.lower_order, ScalarTraits<S>::magnitude(c));
  return out;
}

/// Lower-order coefficients must vanish exactly on the rational backend, and
/// within max(rel_tol * scale, 1e-12) on floats.
template <Scalar S>
bool lower_order_vanishes(const BoundaryIntegral<S>& b, double rel_tol) {
  if constexpr (ScalarTraits<S>::exact) {
    const Monomial top = Monomial::top(b.value.generators());
    for (const auto& [mono, c] : b.value.terms())
      if (mono != top) return false;
    return true;
  } else {
    return b.lower_order <= std::max(rel_tol * b.value.max_magnitude(), 1e-12);
  }
}

/// phi(a^1..a^(k+1)): the top coefficient of the boundary integral at x.
/// Throws VerificationError if lower-order terms survive.
template <Scalar S>
MultilinearFn<S> boundary_functional(const DifferentialForm& w, const Vector<S>& x, double rel_tol = 1e-9) {
  return [w, x, rel_tol](std::span<const Vector<S>> args) -> S {
    std::vector<Vector<S>> tangents(args.begin(), args.end());
    auto b = boundary_integral<S>(w, x, tangents);
    if (!lower_order_vanishes(b, rel_tol))
      throw VerificationError("boundary integral keeps lower-order terms: " + b.value.to_string());
    return b.top;
  };
}

/// d(omega) at x, extracted from boundary integrals by probing with
/// e_i1, ..., e_i(k+1) for each increasing index.
template <Scalar S>
AlternatingMap<S> d_extracted(const DifferentialForm& w, const Vector<S>& x, double rel_tol = 1e-9) {
  if (w.degree() + 1 > w.dim())
    throw DimensionError("d of a " + std::to_string(w.degree()) + "-form on R^" + std::to_string(w.dim()) + " is not defined");
  if (static_cast<int>(x.size()) != w.dim()) throw DimensionError("point dimension differs from the form's");
  return extract_from_function<S>(boundary_functional<S>(w, x, rel_tol), w.dim(), w.degree() + 1);
}

}  // namespace nilforms
