#pragma once

// Infinitesimal parallelepipeds (microcubes) d |-> base + sum_i a^i d_i, their
// marked versions (gamma; e_1, ..., e_k), faces, boundaries and integrals.
//
// Every microcube lives in one ambient Weil algebra fixed up front: faces
// taken at a mark e_i move the base to base + a^i e_i, so bases are
// Weil-valued points. Marks are generator indices of that algebra.

#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "nilforms/alternating.hpp"
#include "nilforms/error.hpp"
#include "nilforms/forms.hpp"
#include "nilforms/weil.hpp"

namespace nilforms {

template <Scalar S>
using WeilPoint = std::vector<Weil<S>>;

template <Scalar S>
struct Microcube {
  WeilPoint<S> base;
  std::vector<Vector<S>> tangents;

  /// Real base point embedded in an algebra with m generators.
  static Microcube at(const Vector<S>& x, std::vector<Vector<S>> tangents, int m) {
    Microcube c;
    for (const auto& xi : x) c.base.push_back(Weil<S>::constant(xi, m));
    c.tangents = std::move(tangents);
    c.validate();
    return c;
  }

  int dim() const { return static_cast<int>(base.size()); }
  int degree() const { return static_cast<int>(tangents.size()); }
  int generators() const { return base.empty() ? 0 : base.front().generators(); }

  void validate() const {
    if (base.empty()) throw DimensionError("microcube needs a base point");
    for (const auto& b : base)
      if (b.generators() != generators()) throw DimensionError("microcube base coordinates live in different Weil algebras");
    for (const auto& t : tangents)
      if (static_cast<int>(t.size()) != dim()) throw DimensionError("tangent length differs from ambient dimension");
  }

  friend bool operator==(const Microcube&, const Microcube&) = default;
};

template <Scalar S>
struct MarkedMicrocube {
  Microcube<S> cube;
  std::vector<int> marks;  // one distinct generator per direction

  void validate() const {
    cube.validate();
    if (marks.size() != cube.tangents.size())
      throw DimensionError("marked microcube of degree " + std::to_string(cube.degree()) + " carries " + std::to_string(marks.size()) +
                           " marks");
    std::uint32_t seen = 0;
    for (int g : marks) {
      if (g < 1 || g > cube.generators())
        throw DimensionError("mark e" + std::to_string(g) + " is not a generator of the ambient algebra");
      if (seen & (1u << (g - 1))) throw DimensionError("mark e" + std::to_string(g) + " used twice");
      seen |= 1u << (g - 1);
    }
  }

  /// e_(marks[0]) * ... * e_(marks[k-1]).
  Monomial mark_monomial() const { return Monomial::of(marks); }

  friend bool operator==(const MarkedMicrocube&, const MarkedMicrocube&) = default;
};

/// (gamma; e_1, ..., e_m) with marks 1..m in an m-generator algebra, m = degree.
template <Scalar S>
MarkedMicrocube<S> marked(const Vector<S>& x, std::vector<Vector<S>> tangents) {
  const int m = static_cast<int>(tangents.size());
  MarkedMicrocube<S> c{Microcube<S>::at(x, std::move(tangents), m), {}};
  for (int g = 1; g <= m; ++g) c.marks.push_back(g);
  return c;
}

template <Scalar S>
struct ChainTerm {
  int sign;  // +1 or -1
  MarkedMicrocube<S> cell;

  friend bool operator==(const ChainTerm&, const ChainTerm&) = default;
};

template <Scalar S>
using Chain = std::vector<ChainTerm<S>>;

/// Where a face freezes its direction: at 0, or at a Weil generator.
struct FaceAt {
  int generator = 0;  // 0 means the zero face
  static FaceAt zero() { return {}; }
  static FaceAt mark(int g) { return {g}; }
};

/// gamma^i_e: drop direction i, freezing d_i = e. At a mark the base moves to
/// base + a^i e.
template <Scalar S>
Microcube<S> face(const Microcube<S>& cube, int i, FaceAt at) {
  if (i < 1 || i > cube.degree())
    throw DimensionError("face direction " + std::to_string(i) + " outside 1.." + std::to_string(cube.degree()));
  Microcube<S> out;
  out.base = cube.base;
  const auto& a = cube.tangents[i - 1];
  if (at.generator != 0) {
    const Weil<S> e = Weil<S>::generator(at.generator, cube.generators());
    for (std::size_t c = 0; c < out.base.size(); ++c)
      if (!ScalarTraits<S>::is_zero(a[c])) out.base[c] += e * a[c];
  }
  for (int j = 1; j <= cube.degree(); ++j)
    if (j != i) out.tangents.push_back(cube.tangents[j - 1]);
  return out;
}

/// d(gamma; e_1..e_k) = sum_i (-1)^i { (gamma^i_0; e without e_i) - (gamma^i_(e_i); e without e_i) }.
/// Terms come out in direction order, zero face before mark face.
template <Scalar S>
Chain<S> boundary(const MarkedMicrocube<S>& cell) {
  cell.validate();
  const int k = cell.cube.degree();
  if (k < 1) throw DimensionError("a 0-dimensional microcube has no boundary");
  Chain<S> out;
  for (int i = 1; i <= k; ++i) {
    std::vector<int> rest;
    for (int j = 1; j <= k; ++j)
      if (j != i) rest.push_back(cell.marks[j - 1]);
    const int sign = (i % 2 == 0) ? 1 : -1;
    out.push_back({sign, {face(cell.cube, i, FaceAt::zero()), rest}});
    out.push_back({-sign, {face(cell.cube, i, FaceAt::mark(cell.marks[i - 1])), rest}});
  }
  return out;
}

/// Boundary of every term, signs multiplied through.
template <Scalar S>
Chain<S> boundary(const Chain<S>& chain) {
  Chain<S> out;
  for (const auto& term : chain)
    for (auto& inner : boundary(term.cell)) out.push_back({term.sign * inner.sign, std::move(inner.cell)});
  return out;
}

/// Merges structurally equal cells, summing their signs, and drops cells whose
/// multiplicity cancels. Cells with multiplicity other than +-1 are kept as
/// repeated terms.
template <Scalar S>
Chain<S> cancel(const Chain<S>& chain) {
  std::vector<std::pair<MarkedMicrocube<S>, int>> tally;
  for (const auto& term : chain) {
    bool found = false;
    for (auto& [cell, count] : tally)
      if (cell == term.cell) {
        count += term.sign;
        found = true;
        break;
      }
    if (!found) tally.emplace_back(term.cell, term.sign);
  }
  Chain<S> out;
  for (const auto& [cell, count] : tally)
    for (int j = 0; j < std::abs(count); ++j) out.push_back({count > 0 ? 1 : -1, cell});
  return out;
}

/// integral over (gamma; e) of omega = sum_I f_I(base) det(minor_I(tangents)) * e_1...e_k.
template <Scalar S>
Weil<S> integral(const DifferentialForm& w, const MarkedMicrocube<S>& cell) {
  cell.validate();
  if (w.degree() != cell.cube.degree())
    throw DimensionError("integrating a " + std::to_string(w.degree()) + "-form over a " + std::to_string(cell.cube.degree()) +
                         "-dimensional microcube");
  if (w.dim() != cell.cube.dim()) throw DimensionError("form and microcube live in different dimensions");
  const int m = cell.cube.generators();
  const Weil<S> marks = Weil<S>::from_terms(m, {{cell.mark_monomial(), S(1)}});
  return eval_form<Weil<S>, S>(w, cell.cube.base, cell.cube.tangents) * marks;
}

/// Signed sum of the term integrals in an algebra with the given generator
/// count (needed for the empty chain).
template <Scalar S>
Weil<S> integral_chain(const DifferentialForm& w, const Chain<S>& chain, int generators) {
  Weil<S> total = Weil<S>::constant(S(0), generators);
  for (const auto& term : chain) {
    Weil<S> v = integral(w, term.cell);
    total = term.sign > 0 ? total + v : total - v;
  }
  return total;
}

}  // namespace nilforms
