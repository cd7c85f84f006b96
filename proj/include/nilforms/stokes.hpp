#pragma once

// Infinitesimal Stokes identities and the vector-analysis dictionary.
//
//   integral over d(gamma; e_1..e_(k+1)) of omega  ==  integral over (gamma; e_1..e_(k+1)) of d(omega)
//
// Both sides are computed in a fresh (k+1)-generator Weil algebra. On the
// rational backend the identity must hold exactly, monomial by monomial.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nilforms/chains.hpp"
#include "nilforms/expr.hpp"
#include "nilforms/extraction.hpp"
#include "nilforms/forms.hpp"

namespace nilforms {

/// Float equality contract: |difference| <= max(rel_tol * scale, abs_floor).
struct Tolerance {
  double rel_tol = 1e-9;
  double abs_floor = 1e-12;
};

template <Scalar S>
struct VerificationReport {
  int dim = 0;
  int degree = 0;   // degree k of omega; gamma has dimension k+1
  Weil<S> lhs;      // integral of omega over the boundary
  Weil<S> rhs;      // integral of d(omega) over the cell
  S top_residual;   // |lhs - rhs| on e_1...e_(k+1)
  S lower_order_max;  // max |coefficient| off the top monomial, both sides
  double tolerance = 0;  // 0 on the exact backend
  bool pass = false;

  static constexpr Backend backend = ScalarTraits<S>::backend;
};

namespace detail {
template <Scalar S>
S magnitude_exact(const S& v) {
  if constexpr (ScalarTraits<S>::exact) return abs(v);
  else return std::fabs(v);
}
}  // namespace detail

/// Compares the two sides for a given derivative `dw` (normally d_formula(w);
/// a different form can be supplied as a negative control).
template <Scalar S>
VerificationReport<S> verify_against(const DifferentialForm& w, const DifferentialForm& dw, const Vector<S>& x,
                                     const std::vector<Vector<S>>& tangents, Tolerance tol = {}) {
  const int k = w.degree();
  if (k >= w.dim()) throw DimensionError("Stokes check needs k < n");
  if (dw.degree() != k + 1 || dw.dim() != w.dim()) throw DimensionError("derivative form has the wrong shape");
  if (static_cast<int>(tangents.size()) != k + 1)
    throw DimensionError("a " + std::to_string(k) + "-form is checked on a " + std::to_string(k + 1) + "-microcube, got " +
                         std::to_string(tangents.size()) + " tangents");
  VerificationReport<S> r;
  r.dim = w.dim();
  r.degree = k;
  auto cell = marked<S>(x, tangents);
  r.lhs = integral_chain(w, boundary(cell), k + 1);
  r.rhs = integral(dw, cell);

  const Monomial top = Monomial::top(k + 1);
  r.top_residual = detail::magnitude_exact<S>(S(r.lhs.coefficient(top) - r.rhs.coefficient(top)));
  r.lower_order_max = S(0);
  for (const auto* side : {&r.lhs, &r.rhs})
    for (const auto& [mono, c] : side->terms())
      if (mono != top) r.lower_order_max = std::max<S>(r.lower_order_max, detail::magnitude_exact<S>(c));

  if constexpr (ScalarTraits<S>::exact) {
    r.pass = sgn(r.top_residual) == 0 && sgn(r.lower_order_max) == 0;
  } else {
    const double scale = std::max(r.lhs.max_magnitude(), r.rhs.max_magnitude());
    r.tolerance = std::max(tol.rel_tol * scale, tol.abs_floor);
    r.pass = r.top_residual <= r.tolerance && r.lower_order_max <= r.tolerance;
  }
  return r;
}

template <Scalar S>
VerificationReport<S> verify(const DifferentialForm& w, const Vector<S>& x, const std::vector<Vector<S>>& tangents,
                             Tolerance tol = {}) {
  return verify_against<S>(w, d_formula(w), x, tangents, tol);
}

// ---------------------------------------------------------------------------
// Vector analysis on R^3: force fields are 1-forms f dx + g dy + h dz, flux
// fields are 2-forms f dy^dz + g dz^dx + h dx^dy.

struct VectorField3 {
  std::array<ScalarField, 3> components;
};

inline void require_r3(const ScalarField& f) {
  if (f.dim != 3) throw DimensionError("vector analysis works on R^3, got a field on R^" + std::to_string(f.dim));
}

/// f dx + g dy + h dz.
inline DifferentialForm force_form(const VectorField3& F) {
  DifferentialForm w(3, 1);
  for (int i = 0; i < 3; ++i) {
    require_r3(F.components[i]);
    w.set({i + 1}, F.components[i]);
  }
  return w;
}

/// f dy^dz + g dz^dx + h dx^dy.
inline DifferentialForm flux_form(const VectorField3& F) {
  DifferentialForm w(3, 2);
  const MultiIndex slots[3] = {{2, 3}, {3, 1}, {1, 2}};
  for (int i = 0; i < 3; ++i) {
    require_r3(F.components[i]);
    w.set(slots[i], F.components[i]);
  }
  return w;
}

inline VectorField3 grad(const ScalarField& phi) {
  require_r3(phi);
  DifferentialForm d = d_formula(DifferentialForm::scalar(phi));
  return VectorField3{{d.coefficient({1}), d.coefficient({2}), d.coefficient({3})}};
}

/// Components of d(f dx + g dy + h dz) on dy^dz, dz^dx, dx^dy.
inline VectorField3 curl(const VectorField3& F) {
  DifferentialForm w = force_form(F);
  return VectorField3{{d_coefficient(w, {2, 3}), d_coefficient(w, {3, 1}), d_coefficient(w, {1, 2})}};
}

/// Coefficient of d(f dy^dz + g dz^dx + h dx^dy) on dx^dy^dz.
inline ScalarField div(const VectorField3& F) {
  return d_coefficient(flux_form(F), {1, 2, 3});
}

template <Scalar S>
struct FluxPairing {
  S via_form;           // flux 2-form of F at x evaluated on (a, b)
  S via_triple_product;  // F(x) . (a x b)
};

template <Scalar S>
FluxPairing<S> flux_pairing(const VectorField3& F, const Vector<S>& x, const Vector<S>& a, const Vector<S>& b) {
  if (x.size() != 3 || a.size() != 3 || b.size() != 3) throw DimensionError("flux pairing needs vectors in R^3");
  FluxPairing<S> out;
  out.via_form = eval_form<S, S>(flux_form(F), x, {a, b});
  const S cross[3] = {S(a[1] * b[2] - a[2] * b[1]), S(a[2] * b[0] - a[0] * b[2]), S(a[0] * b[1] - a[1] * b[0])};
  out.via_triple_product = S(0);
  for (int i = 0; i < 3; ++i) out.via_triple_product += eval_field<S>(F.components[i], x) * cross[i];
  return out;
}

inline std::string to_string(const VectorField3& F) {
  return "(" + to_string(F.components[0]) + ", " + to_string(F.components[1]) + ", " + to_string(F.components[2]) + ")";
}

}  // namespace nilforms
