#pragma once

// Skew-symmetric k-linear maps on R^n in the basis dx_I = dx_i1 ^ ... ^ dx_ik,
// I strictly increasing.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "nilforms/error.hpp"
#include "nilforms/scalar.hpp"

namespace nilforms {

/// 1-based coordinate indices, e.g. {1, 3} for dx1 ^ dx3.
using MultiIndex = std::vector<int>;

template <class S>
using Vector = std::vector<S>;

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

/// All strictly increasing k-tuples from 1..n in lexicographic order.
inline std::vector<MultiIndex> increasing_indices(int n, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > n) return out;
  MultiIndex idx(k);
  for (int j = 0; j < k; ++j) idx[j] = j + 1;
  while (true) {
    out.push_back(idx);
    int j = k - 1;
    while (j >= 0 && idx[j] == n - k + j + 1) --j;
    if (j < 0) break;
    ++idx[j];
    for (int t = j + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

/// Position of a strictly increasing index in increasing_indices(n, k).
inline std::size_t index_rank(const MultiIndex& idx, int n) {
  const int k = static_cast<int>(idx.size());
  std::size_t rank = 0;
  int prev = 0;
  for (int j = 0; j < k; ++j) {
    for (int v = prev + 1; v < idx[j]; ++v) rank += binomial(n - v, k - j - 1);
    prev = idx[j];
  }
  return rank;
}

struct SignedIndex {
  int sign;  // +1 or -1
  MultiIndex index;
};

/// Sorts an index, tracking the permutation sign. Returns nullopt when an
/// index repeats (the wedge vanishes).
inline std::optional<SignedIndex> canonicalize(MultiIndex idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) return std::nullopt;
  return SignedIndex{sign, std::move(idx)};
}

inline std::string differential_name(int i, int n) {
  if (n <= 3) return std::string("d") + "xyz"[i - 1];
  return "dx" + std::to_string(i);
}

inline std::string basis_name(const MultiIndex& idx, int n) {
  if (idx.empty()) return "1";
  std::string s;
  for (int i : idx) {
    if (!s.empty()) s += "^";
    s += differential_name(i, n);
  }
  return s;
}

/// Determinant of a square matrix given as rows. Laplace expansion up to 4x4,
/// fraction-free (Bareiss) elimination above.
template <Scalar S>
S determinant(std::vector<std::vector<S>> a) {
  const std::size_t size = a.size();
  for (const auto& row : a)
    if (row.size() != size) throw DimensionError("determinant of a non-square matrix");
  if (size == 0) return S(1);
  if (size == 1) return a[0][0];
  if (size == 2) return S(a[0][0] * a[1][1] - a[0][1] * a[1][0]);
  if (size <= 4) {
    S total(0);
    for (std::size_t col = 0; col < size; ++col) {
      if (ScalarTraits<S>::is_zero(a[0][col])) continue;
      std::vector<std::vector<S>> minor;
      for (std::size_t r = 1; r < size; ++r) {
        std::vector<S> row;
        for (std::size_t c = 0; c < size; ++c)
          if (c != col) row.push_back(a[r][c]);
        minor.push_back(std::move(row));
      }
      S term = a[0][col] * determinant(std::move(minor));
      if (col % 2) total -= term;
      else total += term;
    }
    return total;
  }
  int sign = 1;
  S prev(1);
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (ScalarTraits<S>::is_zero(a[k][k])) {
      std::size_t p = k + 1;
      while (p < size && ScalarTraits<S>::is_zero(a[p][k])) ++p;
      if (p == size) return S(0);
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i)
      for (std::size_t j = k + 1; j < size; ++j) a[i][j] = S((a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev);
    prev = a[k][k];
  }
  return sign > 0 ? a[size - 1][size - 1] : S(-a[size - 1][size - 1]);
}

/// det of the k x k minor with rows I taken from the columns `vectors`:
/// M[r][s] = vectors[s][I[r] - 1].
template <Scalar S>
S minor_determinant(const MultiIndex& rows, std::span<const Vector<S>> vectors) {
  std::vector<std::vector<S>> m(rows.size(), std::vector<S>(vectors.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t s = 0; s < vectors.size(); ++s) m[r][s] = vectors[s][rows[r] - 1];
  return determinant(std::move(m));
}

/// Standard basis vector e_i of R^n.
template <Scalar S>
Vector<S> basis_vector(int i, int n) {
  Vector<S> v(n, S(0));
  v[i - 1] = S(1);
  return v;
}

template <Scalar S>
class AlternatingMap {
 public:
  AlternatingMap(int n, int k) : n_(n), k_(k) {
    if (n < 1 || k < 0 || k > n)
      throw DimensionError("no alternating " + std::to_string(k) + "-linear maps on R^" + std::to_string(n));
    coeffs_.assign(binomial(n, k), S(0));
  }

  /// The basis map dx_I, I in any order (sign applied, zero map on repeats).
  static AlternatingMap basis(int n, const MultiIndex& idx) {
    AlternatingMap a(n, static_cast<int>(idx.size()));
    if (auto c = canonicalize(idx)) a.set(c->index, S(c->sign));
    return a;
  }

  int dim() const { return n_; }
  int degree() const { return k_; }
  std::span<const S> coefficients() const { return coeffs_; }

  /// alpha_I for I in any order; antisymmetric in I, zero on repeats.
  S coefficient(const MultiIndex& idx) const {
    check_index(idx);
    auto c = canonicalize(idx);
    if (!c) return S(0);
    const S& v = coeffs_[index_rank(c->index, n_)];
    return c->sign > 0 ? v : S(-v);
  }

  void set(const MultiIndex& idx, const S& value) {
    check_index(idx);
    auto c = canonicalize(idx);
    if (!c) throw DimensionError("cannot set a coefficient on a repeated index");
    coeffs_[index_rank(c->index, n_)] = c->sign > 0 ? value : S(-value);
  }

  /// sum_I alpha_I det(minor_I(vectors)).
  S operator()(std::span<const Vector<S>> vectors) const {
    if (static_cast<int>(vectors.size()) != k_)
      throw DimensionError("alternating map of degree " + std::to_string(k_) + " applied to " + std::to_string(vectors.size()) + " vectors");
    for (const auto& v : vectors)
      if (static_cast<int>(v.size()) != n_) throw DimensionError("argument vector length differs from R^" + std::to_string(n_));
    S total(0);
    auto indices = increasing_indices(n_, k_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
      if (ScalarTraits<S>::is_zero(coeffs_[r])) continue;
      total += coeffs_[r] * minor_determinant<S>(indices[r], vectors);
    }
    return total;
  }
  S operator()(const std::vector<Vector<S>>& vectors) const { return (*this)(std::span<const Vector<S>>(vectors)); }

  friend AlternatingMap operator+(AlternatingMap a, const AlternatingMap& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
    return a;
  }
  friend AlternatingMap operator*(const S& s, AlternatingMap a) {
    for (auto& c : a.coeffs_) c *= s;
    return a;
  }

  friend bool operator==(const AlternatingMap& a, const AlternatingMap& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const {
    std::string out;
    auto indices = increasing_indices(n_, k_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
      if (ScalarTraits<S>::is_zero(coeffs_[r])) continue;
      if (!out.empty()) out += " + ";
      std::string c = ScalarTraits<S>::to_string(coeffs_[r]);
      if (k_ == 0) out += c;
      else out += (coeffs_[r] == S(1) ? "" : "(" + c + ")*") + basis_name(indices[r], n_);
    }
    return out.empty() ? "0" : out;
  }

 private:
  void check_index(const MultiIndex& idx) const {
    if (static_cast<int>(idx.size()) != k_) throw DimensionError("multi-index length differs from degree");
    for (int i : idx)
      if (i < 1 || i > n_) throw DimensionError("multi-index entry " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }
  void check_same(const AlternatingMap& o) const {
    if (n_ != o.n_ || k_ != o.k_) throw DimensionError("alternating maps of different shape");
  }

  int n_;
  int k_;
  std::vector<S> coeffs_;
};

/// A ^ B with shuffle signs.
template <Scalar S>
AlternatingMap<S> wedge(const AlternatingMap<S>& a, const AlternatingMap<S>& b) {
  if (a.dim() != b.dim()) throw DimensionError("wedge of maps on different spaces");
  const int n = a.dim(), k = a.degree(), l = b.degree();
  if (k + l > n)
    throw DimensionError("wedge degree " + std::to_string(k + l) + " exceeds dimension " + std::to_string(n));
  AlternatingMap<S> out(n, k + l);
  for (const auto& I : increasing_indices(n, k)) {
    S ca = a.coefficient(I);
    if (ScalarTraits<S>::is_zero(ca)) continue;
    for (const auto& J : increasing_indices(n, l)) {
      S cb = b.coefficient(J);
      if (ScalarTraits<S>::is_zero(cb)) continue;
      MultiIndex joined = I;
      joined.insert(joined.end(), J.begin(), J.end());
      auto c = canonicalize(joined);
      if (!c) continue;
      S prod = ca * cb;
      S current = out.coefficient(c->index);
      out.set(c->index, c->sign > 0 ? S(current + prod) : S(current - prod));
    }
  }
  return out;
}

template <class S>
using MultilinearFn = std::function<S(std::span<const Vector<S>>)>;

/// Reads alpha_I = F(e_i1, ..., e_ik) off a function promised to be k-linear
/// and skew. Nothing is verified here; see check_alternating.
template <Scalar S>
AlternatingMap<S> extract_from_function(const MultilinearFn<S>& f, int n, int k) {
  AlternatingMap<S> out(n, k);
  for (const auto& I : increasing_indices(n, k)) {
    std::vector<Vector<S>> probe;
    for (int i : I) probe.push_back(basis_vector<S>(i, n));
    out.set(I, f(std::span<const Vector<S>>(probe)));
  }
  return out;
}

struct AlternatingCheck {
  double additivity = 0;    // max |F(..u+v..) - F(..u..) - F(..v..)|
  double homogeneity = 0;   // max |F(..s u..) - s F(..u..)|
  double skew = 0;          // max |F(..u..v..) + F(..v..u..)|
  double tolerance = 0;     // 0 on the exact backend
  int trials = 0;

  bool additive() const { return additivity <= tolerance; }
  bool homogeneous() const { return homogeneity <= tolerance; }
  bool skew_symmetric() const { return skew <= tolerance; }
  bool passed() const { return additive() && homogeneous() && skew_symmetric(); }
};

/// Random scalar used for probing: small rationals p/q on the exact backend,
/// uniform in [-2, 2] on floats.
template <Scalar S, class Rng>
S random_probe_scalar(Rng& rng) {
  if constexpr (ScalarTraits<S>::exact) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
  } else {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return u(rng);
  }
}

template <Scalar S, class Rng>
Vector<S> random_probe_vector(int n, Rng& rng) {
  Vector<S> v(n);
  for (auto& x : v) x = random_probe_scalar<S>(rng);
  return v;
}

/// Samples random arguments and measures violations of additivity and
/// homogeneity in each slot and of sign change under a random transposition.
/// On floats the tolerance is rel_tol * (largest |F| seen), floored at 1e-12.
template <Scalar S>
AlternatingCheck check_alternating(const MultilinearFn<S>& f, int n, int k, int trials, std::uint64_t seed,
                                   double rel_tol = 1e-9) {
  if (trials < 1) throw Error("check_alternating needs at least one trial");
  std::mt19937_64 rng(seed);
  AlternatingCheck report;
  report.trials = trials;
  double scale = 0;
  auto call = [&](const std::vector<Vector<S>>& args) {
    S v = f(std::span<const Vector<S>>(args));
    scale = std::max(scale, ScalarTraits<S>::magnitude(v));
    return v;
  };
  auto mag = [](const S& v) { return ScalarTraits<S>::magnitude(v); };
  for (int t = 0; t < trials && k > 0; ++t) {
    std::vector<Vector<S>> args;
    for (int j = 0; j < k; ++j) args.push_back(random_probe_vector<S>(n, rng));
    std::uniform_int_distribution<int> slot_dist(0, k - 1);
    const int slot = slot_dist(rng);
    const S base = call(args);

    Vector<S> extra = random_probe_vector<S>(n, rng);
    auto shifted = args, alone = args;
    for (int i = 0; i < n; ++i) shifted[slot][i] = args[slot][i] + extra[i];
    alone[slot] = extra;
    report.additivity = std::max(report.additivity, mag(S(call(shifted) - base - call(alone))));

    const S s = random_probe_scalar<S>(rng);
    auto scaled = args;
    for (auto& x : scaled[slot]) x *= s;
    report.homogeneity = std::max(report.homogeneity, mag(S(call(scaled) - s * base)));

    if (k >= 2) {
      int other = slot_dist(rng);
      while (other == slot) other = slot_dist(rng);
      auto swapped = args;
      std::swap(swapped[slot], swapped[other]);
      report.skew = std::max(report.skew, mag(S(call(swapped) + base)));
    }
  }
  if constexpr (!ScalarTraits<S>::exact) report.tolerance = std::max(rel_tol * scale, 1e-12);
  return report;
}

}  // namespace nilforms
