#pragma once

// Truncated polynomial algebra R[e1..em]/(e1^2, ..., em^2).
//
// An element is a sparse table from squarefree monomials to scalars. A
// monomial is a bitmask over the generators, so a repeated generator cannot
// be represented at all: products whose monomials overlap are simply dropped.
// With a single generator this is the ordinary dual-number ring; with m
// generators it is m-fold nested dual numbers, dimension 2^m.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nilforms/error.hpp"
#include "nilforms/scalar.hpp"

namespace nilforms {

inline constexpr int max_generators = 16;

class Monomial {
 public:
  constexpr Monomial() = default;
  constexpr explicit Monomial(std::uint32_t bits) : bits_(bits) {}

  /// Product of the listed generators (1-based). Repeats are rejected.
  static Monomial of(std::initializer_list<int> generators) {
    return of(std::vector<int>(generators));
  }
  static Monomial of(const std::vector<int>& generators) {
    std::uint32_t bits = 0;
    for (int g : generators) {
      if (g < 1 || g > max_generators)
        throw DimensionError("generator index " + std::to_string(g) + " out of range");
      std::uint32_t bit = 1u << (g - 1);
      if (bits & bit) throw DimensionError("repeated generator e" + std::to_string(g) + " in monomial");
      bits |= bit;
    }
    return Monomial(bits);
  }
  /// e1 e2 ... em.
  static constexpr Monomial top(int m) { return Monomial(m == 0 ? 0u : ((1u << m) - 1u)); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int degree() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int g) const { return (bits_ >> (g - 1)) & 1u; }
  constexpr bool disjoint(Monomial o) const { return (bits_ & o.bits_) == 0; }
  constexpr Monomial operator|(Monomial o) const { return Monomial(bits_ | o.bits_); }

  std::vector<int> generators() const {
    std::vector<int> out;
    for (int g = 1; g <= max_generators; ++g)
      if (contains(g)) out.push_back(g);
    return out;
  }

  std::string to_string() const {
    if (empty()) return "1";
    std::string s;
    for (int g : generators()) {
      if (!s.empty()) s += "*";
      s += "e" + std::to_string(g);
    }
    return s;
  }

  friend constexpr auto operator<=>(Monomial, Monomial) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Derivative oracle for lifting: returns f^(k)(a).
template <class S>
using DerivativeFn = std::function<S(int k, const S& a)>;

template <Scalar S>
class Weil {
 public:
  using scalar_type = S;
  using Table = std::map<Monomial, S>;

  Weil() = default;

  static Weil constant(const S& c, int m) {
    check_generator_count(m);
    Weil w(m);
    w.set(Monomial{}, c);
    return w;
  }

  static Weil generator(int i, int m) {
    check_generator_count(m);
    if (i < 1 || i > m)
      throw DimensionError("generator index " + std::to_string(i) + " outside 1.." + std::to_string(m));
    Weil w(m);
    w.set(Monomial(1u << (i - 1)), ScalarTraits<S>::from_int(1));
    return w;
  }

  /// Builds an element from explicit (monomial, coefficient) pairs.
  static Weil from_terms(int m, const std::vector<std::pair<Monomial, S>>& terms) {
    check_generator_count(m);
    Weil w(m);
    for (const auto& [mono, c] : terms) {
      if (mono.bits() >> m) throw DimensionError("monomial " + mono.to_string() + " uses a generator beyond e" + std::to_string(m));
      S sum = w.coefficient(mono) + c;
      w.set(mono, sum);
    }
    return w;
  }

  int generators() const { return m_; }
  const Table& terms() const { return coeffs_; }

  S coefficient(Monomial mono) const {
    auto it = coeffs_.find(mono);
    return it == coeffs_.end() ? S(0) : it->second;
  }
  S real() const { return coefficient(Monomial{}); }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_unit() const { return !ScalarTraits<S>::is_zero(real()); }

  /// Same element without its real part.
  Weil nilpotent_part() const {
    Weil w = *this;
    w.coeffs_.erase(Monomial{});
    return w;
  }

  /// Re-embeds into an algebra with more generators.
  Weil widened(int m) const {
    check_generator_count(m);
    if (m < m_) throw DimensionError("cannot narrow a Weil element from " + std::to_string(m_) + " to " + std::to_string(m) + " generators");
    Weil w = *this;
    w.m_ = m;
    return w;
  }

  /// Renames generator g to perm[g-1] (1-based). perm must be a permutation
  /// of 1..m.
  Weil relabeled(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != m_) throw DimensionError("relabeling must cover every generator");
    Weil w(m_);
    for (const auto& [mono, c] : coeffs_) {
      std::vector<int> gens;
      for (int g : mono.generators()) gens.push_back(perm[g - 1]);
      w.coeffs_[Monomial::of(gens)] = c;
    }
    return w;
  }

  Weil operator-() const {
    Weil w = *this;
    for (auto& [mono, c] : w.coeffs_) c = -c;
    return w;
  }

  friend Weil operator+(const Weil& a, const Weil& b) {
    check_same(a, b);
    Weil w = a;
    for (const auto& [mono, c] : b.coeffs_) w.set(mono, w.coefficient(mono) + c);
    return w;
  }

  friend Weil operator-(const Weil& a, const Weil& b) {
    check_same(a, b);
    Weil w = a;
    for (const auto& [mono, c] : b.coeffs_) w.set(mono, w.coefficient(mono) - c);
    return w;
  }

  friend Weil operator*(const Weil& a, const Weil& b) {
    check_same(a, b);
    Table acc;
    for (const auto& [ma, ca] : a.coeffs_)
      for (const auto& [mb, cb] : b.coeffs_) {
        if (!ma.disjoint(mb)) continue;  // e_i^2 = 0
        auto [it, fresh] = acc.try_emplace(ma | mb, ca * cb);
        if (!fresh) it->second += ca * cb;
      }
    Weil w(a.m_);
    for (auto& [mono, c] : acc) w.set(mono, c);
    return w;
  }

  friend Weil operator*(const Weil& a, const S& s) {
    Weil w(a.m_);
    for (const auto& [mono, c] : a.coeffs_) w.set(mono, c * s);
    return w;
  }
  friend Weil operator*(const S& s, const Weil& a) { return a * s; }

  Weil& operator+=(const Weil& o) { return *this = *this + o; }
  Weil& operator-=(const Weil& o) { return *this = *this - o; }
  Weil& operator*=(const Weil& o) { return *this = *this * o; }

  Weil pow(unsigned k) const {
    Weil result = constant(S(1), m_);
    Weil base = *this;
    while (k) {
      if (k & 1u) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  /// Exact structural equality (same generator count, same nonzero table).
  friend bool operator==(const Weil& a, const Weil& b) {
    return a.m_ == b.m_ && a.coeffs_ == b.coeffs_;
  }

  /// Largest coefficient magnitude, as a double.
  double max_magnitude() const {
    double mx = 0;
    for (const auto& [mono, c] : coeffs_) mx = std::max(mx, ScalarTraits<S>::magnitude(c));
    return mx;
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, c] : coeffs_) {
      if (!first) os << " + ";
      first = false;
      std::string cs = ScalarTraits<S>::to_string(c);
      if (mono.empty()) {
        os << cs;
      } else {
        const bool plain = std::all_of(cs.begin(), cs.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.'; });
        if (c != S(1)) os << (plain ? cs : "(" + cs + ")") << "*";
        os << mono.to_string();
      }
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Weil& w) { return os << w.to_string(); }

 private:
  explicit Weil(int m) : m_(m) {}

  // Zero-elision: only exact zeros are dropped, small floats are kept.
  void set(Monomial mono, const S& c) {
    if (ScalarTraits<S>::is_zero(c))
      coeffs_.erase(mono);
    else
      coeffs_[mono] = c;
  }

  static void check_generator_count(int m) {
    if (m < 0 || m > max_generators)
      throw DimensionError("generator count " + std::to_string(m) + " outside 0.." + std::to_string(max_generators));
  }
  static void check_same(const Weil& a, const Weil& b) {
    if (a.m_ != b.m_)
      throw DimensionError("Weil algebra mismatch: " + std::to_string(a.m_) + " vs " + std::to_string(b.m_) + " generators");
  }

  int m_ = 0;
  Table coeffs_;
};

/// Truncated Taylor lift: f(a + n) = sum_k f^(k)(a) n^k / k!, where a is the
/// real part and n the nilpotent part. The sum is finite since n^(m+1) = 0.
template <Scalar S>
Weil<S> lift(const Weil<S>& w, const DerivativeFn<S>& derivative) {
  const int m = w.generators();
  const S a = w.real();
  const Weil<S> n = w.nilpotent_part();
  Weil<S> result = Weil<S>::constant(derivative(0, a), m);
  Weil<S> power = Weil<S>::constant(S(1), m);
  S factorial(1);
  for (int k = 1; k <= m; ++k) {
    power = power * n;
    if (power.is_zero()) break;
    factorial *= S(k);
    S dk = derivative(k, a);
    result += power * S(dk / factorial);
  }
  return result;
}

enum class Elementary { sin, cos, exp, ln, sqrt };

inline std::string_view elementary_name(Elementary f) {
  switch (f) {
    case Elementary::sin: return "sin";
    case Elementary::cos: return "cos";
    case Elementary::exp: return "exp";
    case Elementary::ln: return "ln";
    case Elementary::sqrt: return "sqrt";
  }
  return "?";
}

/// k-th derivative of an elementary function at a real point. Domain checks
/// are the caller's business except for the exact backend, which has no
/// transcendental functions at all.
template <Scalar S>
S elementary_derivative(Elementary f, int k, const S& a) {
  if constexpr (ScalarTraits<S>::exact) {
    throw DomainError(std::string(elementary_name(f)) + " is transcendental and unavailable on the rational backend");
  } else {
    switch (f) {
      case Elementary::sin:
        switch (k % 4) {
          case 0: return std::sin(a);
          case 1: return std::cos(a);
          case 2: return -std::sin(a);
          default: return -std::cos(a);
        }
      case Elementary::cos:
        switch (k % 4) {
          case 0: return std::cos(a);
          case 1: return -std::sin(a);
          case 2: return -std::cos(a);
          default: return std::sin(a);
        }
      case Elementary::exp:
        return std::exp(a);
      case Elementary::ln: {
        if (k == 0) return std::log(a);
        // (-1)^(k-1) (k-1)! / a^k
        double c = (k % 2 == 1) ? 1.0 : -1.0;
        for (int j = 2; j < k; ++j) c *= j;
        return c / std::pow(a, k);
      }
      case Elementary::sqrt: {
        double c = 1.0;
        for (int j = 0; j < k; ++j) c *= 0.5 - j;
        return c * std::pow(a, 0.5 - k);
      }
    }
    return 0.0;
  }
}

/// Lifts an elementary function to Weil arguments. ln and sqrt need a
/// positive real part.
template <Scalar S>
Weil<S> lift(Elementary f, const Weil<S>& w) {
  if constexpr (!ScalarTraits<S>::exact) {
    if ((f == Elementary::ln || f == Elementary::sqrt) && !(w.real() > 0))
      throw DomainError(std::string(elementary_name(f)) + " needs a positive real part, got " + ScalarTraits<S>::to_string(w.real()));
  }
  return lift<S>(w, [f](int k, const S& a) { return elementary_derivative<S>(f, k, a); });
}

/// Integer power through the lift (derivatives p!/(p-k)! a^(p-k)). Agrees with
/// Weil::pow exactly on the rational backend.
template <Scalar S>
Weil<S> lift_power(const Weil<S>& w, unsigned p) {
  return lift<S>(w, [p](int k, const S& a) {
    if (static_cast<unsigned>(k) > p) return S(0);
    S c(1);
    for (unsigned j = 0; j < static_cast<unsigned>(k); ++j) c *= S(static_cast<long>(p - j));
    S v(1);
    for (unsigned j = 0; j < p - static_cast<unsigned>(k); ++j) v *= a;
    return S(c * v);
  });
}

/// Inverse of a unit by truncated geometric series: 1/(a+n) = sum (-1)^k n^k / a^(k+1).
template <Scalar S>
Weil<S> reciprocal(const Weil<S>& w) {
  if (!w.is_unit()) throw DomainError("division by a non-unit Weil element (zero real part): " + w.to_string());
  return lift<S>(w, [](int k, const S& a) {
    S c = (k % 2 == 0) ? S(1) : S(-1);
    for (int j = 2; j <= k; ++j) c *= S(j);
    S den = a;
    for (int j = 0; j < k; ++j) den *= a;
    return S(c / den);
  });
}

}  // namespace nilforms
