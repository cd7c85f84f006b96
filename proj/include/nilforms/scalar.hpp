#pragma once

// Scalar backends: binary64 floats and exact GMP rationals.

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include "nilforms/error.hpp"

namespace nilforms {

using Rational = mpq_class;

enum class Backend { float64, rational };

inline std::string_view backend_name(Backend b) {
  return b == Backend::float64 ? "float" : "rational";
}

inline Backend parse_backend(std::string_view s) {
  if (s == "float" || s == "float64") return Backend::float64;
  if (s == "rational" || s == "exact") return Backend::rational;
  throw Error("unknown backend '" + std::string(s) + "' (expected float or rational)");
}

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr Backend backend = Backend::float64;

  static double from_rational(const Rational& q) { return q.get_d(); }
  static double from_int(long v) { return static_cast<double>(v); }
  static double magnitude(double v) { return std::fabs(v); }
  static bool is_zero(double v) { return v == 0.0; }

  // Shortest representation that reads back to the same double.
  static std::string to_string(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Backend backend = Backend::rational;

  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_int(long v) { return Rational(v); }
  static double magnitude(const Rational& v) { return std::fabs(v.get_d()); }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static std::string to_string(const Rational& v) { return v.get_str(); }
};

template <class S>
concept Scalar = requires { ScalarTraits<S>::exact; };

/// Reads an integer, `p/q`, or decimal literal (with optional exponent) as an
/// exact rational. Throws Error on malformed input or zero denominator.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty()) throw Error("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(std::string_view(s).substr(0, slash));
    Rational den = parse_rational(std::string_view(s).substr(slash + 1));
    if (sgn(den) == 0) throw Error("zero denominator in '" + s + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false, seen_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw Error("malformed number '" + s + "'");
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw Error("malformed number '" + s + "'");
    ++pos;
    auto rest = std::string_view(s).substr(pos);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty())
      throw Error("malformed exponent in '" + s + "'");
  }
  mpz_class mantissa(digits, 10);
  long shift = exponent - scale;
  mpz_class ten = 10;
  mpz_class factor;
  mpz_pow_ui(factor.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(mantissa * factor) : Rational(mantissa, factor);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

/// Parses a scalar for the given backend. Float backend accepts anything
/// strtod accepts plus `p/q`; the rational backend reads decimals exactly.
template <Scalar S>
S parse_scalar_value(std::string_view text) {
  if constexpr (ScalarTraits<S>::exact) {
    return parse_rational(text);
  } else {
    std::string s(text);
    if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error("malformed number '" + s + "'");
    }
    while (used < s.size() && (s[used] == ' ' || s[used] == '\t')) ++used;
    if (used != s.size()) throw Error("malformed number '" + s + "'");
    return v;
  }
}

}  // namespace nilforms
