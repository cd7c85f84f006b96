#pragma once

// Differential k-forms on R^n with expression coefficients.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nilforms/alternating.hpp"
#include "nilforms/error.hpp"
#include "nilforms/expr.hpp"
#include "nilforms/parser.hpp"

namespace nilforms {

/// omega = sum_I f_I dx_I over strictly increasing I. Coefficients are stored
/// densely in increasing_indices(n, k) order; absent terms are the constant 0.
class DifferentialForm {
 public:
  DifferentialForm(int n, int k) : n_(n), k_(k) {
    if (n < 1 || k < 0 || k > n)
      throw DimensionError("no differential " + std::to_string(k) + "-forms on R^" + std::to_string(n));
    coeffs_.assign(binomial(n, k), ast::constant(0));
  }

  /// The (n+1)-form on R^n: no components, prints as 0.
  static DifferentialForm empty_top(int n) {
    DifferentialForm w(n, n);
    w.k_ = n + 1;
    w.coeffs_.clear();
    return w;
  }

  /// The 0-form given by a scalar field.
  static DifferentialForm scalar(const ScalarField& f) {
    DifferentialForm w(f.dim, 0);
    w.coeffs_[0] = f.root;
    return w;
  }

  int dim() const { return n_; }
  int degree() const { return k_; }

  /// f_I for I in any order: antisymmetric in I, constant 0 on repeats.
  ScalarField coefficient(const MultiIndex& idx) const {
    check_index(idx);
    auto c = canonicalize(idx);
    if (!c) return ScalarField{n_, ast::constant(0)};
    const NodePtr& f = coeffs_[index_rank(c->index, n_)];
    return ScalarField{n_, c->sign > 0 ? f : ast::negate(f)};
  }

  void set(const MultiIndex& idx, const ScalarField& f) {
    check_index(idx);
    if (f.dim != n_) throw DimensionError("coefficient field dimension differs from the form's");
    auto c = canonicalize(idx);
    if (!c) throw DimensionError("cannot set a coefficient on a repeated index");
    coeffs_[index_rank(c->index, n_)] = c->sign > 0 ? f.root : ast::negate(f.root);
  }

  /// Adds f to the coefficient of dx_I (I in any order).
  void accumulate(const MultiIndex& idx, const NodePtr& f) {
    check_index(idx);
    auto c = canonicalize(idx);
    if (!c) return;
    NodePtr& slot = coeffs_[index_rank(c->index, n_)];
    slot = c->sign > 0 ? ast::sum(slot, f) : ast::difference(slot, f);
  }

  /// (I, f_I) in lexicographic order of I, including zero coefficients.
  std::vector<std::pair<MultiIndex, ScalarField>> terms() const {
    std::vector<std::pair<MultiIndex, ScalarField>> out;
    auto indices = increasing_indices(n_, k_);
    for (std::size_t r = 0; r < indices.size(); ++r) out.emplace_back(indices[r], ScalarField{n_, coeffs_[r]});
    return out;
  }

  bool is_structurally_zero() const {
    for (const auto& c : coeffs_)
      if (!ast::is_zero(c)) return false;
    return true;
  }

  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.n_ != b.n_ || a.k_ != b.k_) return false;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      if (!same_tree(a.coeffs_[i], b.coeffs_[i])) return false;
    return true;
  }

 private:
  void check_index(const MultiIndex& idx) const {
    if (static_cast<int>(idx.size()) != k_) throw DimensionError("multi-index length differs from form degree");
    for (int i : idx)
      if (i < 1 || i > n_) throw DimensionError("multi-index entry " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }

  int n_;
  int k_;
  std::vector<NodePtr> coeffs_;
};

inline DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw DimensionError("adding forms of different shape");
  DifferentialForm out = a;
  for (const auto& [idx, f] : b.terms()) out.accumulate(idx, f.root);
  return out;
}

/// c * omega for a constant literal c.
inline DifferentialForm scale(const Literal& c, const DifferentialForm& w) {
  DifferentialForm out(w.dim(), w.degree());
  for (const auto& [idx, f] : w.terms()) out.set(idx, ScalarField{w.dim(), ast::product(ast::constant(c), f.root)});
  return out;
}

struct ParsedForm {
  DifferentialForm form;
  std::vector<std::string> warnings;
};

/// Parses `<scalar> * dxi ^ dxj ^ ...` terms joined by + and -. Differentials
/// are normalised to increasing order with the permutation sign folded into
/// the coefficient. A term with a repeated differential contributes zero and
/// produces a warning. All terms must have the same degree.
inline ParsedForm parse_form(std::string_view text, int dim) {
  if (dim < 1) throw DimensionError("dimension must be at least 1");
  parsing::Parser p(text, dim, true);
  auto terms = p.parse_form_terms();
  const int degree = static_cast<int>(terms.front().differentials.size());
  for (const auto& t : terms)
    if (static_cast<int>(t.differentials.size()) != degree)
      throw ParseError("mixed degrees " + std::to_string(degree) + " and " + std::to_string(t.differentials.size()) + " in form",
                       t.line, t.column);
  std::vector<std::string> warnings;
  if (degree > dim)
    throw ParseError("form degree " + std::to_string(degree) + " exceeds dimension " + std::to_string(dim), terms.front().line,
                     terms.front().column);
  DifferentialForm form(dim, degree);
  for (const auto& t : terms) {
    if (!canonicalize(t.differentials)) {
      warnings.push_back("term at line " + std::to_string(t.line) + ", column " + std::to_string(t.column) +
                         " repeats a differential and contributes zero");
      continue;
    }
    form.accumulate(t.differentials, t.coefficient);
  }
  return ParsedForm{std::move(form), std::move(warnings)};
}

/// Canonical text: terms in lexicographic index order, zero terms omitted.
inline std::string to_string(const DifferentialForm& w) {
  std::string out;
  for (const auto& [idx, f] : w.terms()) {
    const NodePtr& c = f.root;
    if (ast::is_zero(c)) continue;
    std::string coeff;
    bool negative = false;
    NodePtr shown = c;
    if (!out.empty()) {
      if (c->op == Op::neg) {
        negative = true;
        shown = c->lhs;
      } else if (ast::is_constant(c) && c->value.is_negative()) {
        negative = true;
        shown = ast::negate(c);
      }
    }
    if (idx.empty()) {
      coeff = to_string(shown, w.dim());
    } else if (!ast::is_one(shown)) {
      coeff = to_string(shown, w.dim());
      if (detail::precedence(*shown) < 2 || (shown->op == Op::constant && detail::precedence(*shown) == 2)) coeff = "(" + coeff + ")";
      coeff += "*";
    }
    if (!out.empty()) out += negative ? " - " : " + ";
    out += coeff;
    if (!idx.empty()) out += basis_name(idx, w.dim());
  }
  return out.empty() ? "0" : out;
}

/// sum_I f_I(point) * det(minor_I(tangents)). The point may be real or
/// Weil-valued; tangents are real.
template <class C, Scalar S = typename Carrier<C>::scalar_type>
C eval_form(const DifferentialForm& w, std::span<const C> point, std::span<const Vector<S>> tangents) {
  if (static_cast<int>(point.size()) != w.dim()) throw DimensionError("point dimension differs from the form's");
  if (static_cast<int>(tangents.size()) != w.degree())
    throw DimensionError("a " + std::to_string(w.degree()) + "-form needs " + std::to_string(w.degree()) + " tangent vectors, got " +
                         std::to_string(tangents.size()));
  for (const auto& t : tangents)
    if (static_cast<int>(t.size()) != w.dim()) throw DimensionError("tangent vector length differs from the form's dimension");
  C total = C(Carrier<C>::constant(Literal::rational(0), point.front()));
  for (const auto& [idx, f] : w.terms()) {
    if (ast::is_zero(f.root)) continue;
    S minor = minor_determinant<S>(idx, tangents);
    if (ScalarTraits<S>::is_zero(minor)) continue;
    total = total + eval_field<C>(f, point) * minor;
  }
  return total;
}

template <class C, Scalar S = typename Carrier<C>::scalar_type>
C eval_form(const DifferentialForm& w, const std::vector<C>& point, const std::vector<Vector<S>>& tangents) {
  return eval_form<C, S>(w, std::span<const C>(point), std::span<const Vector<S>>(tangents));
}

/// The form's value at a real point as an alternating map.
template <Scalar S>
AlternatingMap<S> pointwise(const DifferentialForm& w, const std::vector<S>& point) {
  AlternatingMap<S> out(w.dim(), w.degree());
  for (const auto& [idx, f] : w.terms()) out.set(idx, eval_field<S>(f, point));
  return out;
}

/// Coefficient of d(omega) on dx_i1 ^ ... ^ dx_i(k+1) for an index tuple in any
/// order: sum_j (-1)^(j+1) d f_(I without i_j) / d x_(i_j).
inline ScalarField d_coefficient(const DifferentialForm& w, const MultiIndex& idx) {
  if (static_cast<int>(idx.size()) != w.degree() + 1) throw DimensionError("index length must be degree + 1");
  NodePtr acc = ast::constant(0);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    MultiIndex rest;
    for (std::size_t t = 0; t < idx.size(); ++t)
      if (t != j) rest.push_back(idx[t]);
    NodePtr partial = diff_symbolic(w.coefficient(rest), idx[j]).root;
    acc = (j % 2 == 0) ? ast::sum(acc, partial) : ast::difference(acc, partial);
  }
  return ScalarField{w.dim(), acc};
}

/// Exterior derivative by the closed coefficient formula. The derivative of a
/// top-degree form is an error unless allow_top is set, in which case the
/// empty (n+1)-form comes back.
inline DifferentialForm d_formula(const DifferentialForm& w, bool allow_top = false) {
  const int n = w.dim(), k = w.degree();
  if (k >= n) {
    if (!allow_top)
      throw DimensionError("d of a " + std::to_string(k) + "-form on R^" + std::to_string(n) + " has no (k+1)-covectors to live in");
    return DifferentialForm::empty_top(n);
  }
  DifferentialForm out(n, k + 1);
  for (const auto& idx : increasing_indices(n, k + 1)) out.set(idx, d_coefficient(w, idx));
  return out;
}

}  // namespace nilforms
