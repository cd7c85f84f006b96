#pragma once

// Recursive-descent parser for scalar fields and form expressions.
//
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := atom ('**' integer)? | '-' factor
//   atom     := number | variable | func '(' expr ')' | '(' expr ')'
//   func     := sin | cos | exp | ln | sqrt
//   variable := x | y | z | x<digits>
//   number   := digits ('/' digits)? | float-literal
//
// A quotient of two exact literals is read as one rational literal, and a
// minus sign applied directly to a literal gives a negative literal; no other
// folding happens at parse time.
//
// Form expressions extend `term` with a trailing wedge of differentials:
//   fterm := term '*' wedge | wedge | term
//   wedge := dxi ('^' dxj)*

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nilforms/error.hpp"
#include "nilforms/expr.hpp"

namespace nilforms {

namespace parsing {

enum class Tok { number, ident, plus, minus, star, slash, power, caret, lparen, rparen, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  bool is_float = false;  // number tokens only
  int line = 1;
  int column = 1;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t j = 0; j < count; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_digit = [&](std::size_t j) { return j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])); };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (is_digit(i)) {
      std::size_t j = i;
      while (is_digit(j)) ++j;
      if (j < src.size() && src[j] == '.' && is_digit(j + 1)) {
        t.is_float = true;
        ++j;
        while (is_digit(j)) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (is_digit(k)) {
          t.is_float = true;
          j = k;
          while (is_digit(j)) ++j;
        }
      }
      t.kind = Tok::number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '*' && i + 1 < src.size() && src[i + 1] == '*') {
      t.kind = Tok::power;
      t.text = "**";
      advance(2);
    } else {
      switch (c) {
        case '+': t.kind = Tok::plus; break;
        case '-': t.kind = Tok::minus; break;
        case '*': t.kind = Tok::star; break;
        case '/': t.kind = Tok::slash; break;
        case '^': t.kind = Tok::caret; break;
        case '(': t.kind = Tok::lparen; break;
        case ')': t.kind = Tok::rparen; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

inline std::optional<Elementary> function_named(std::string_view s) {
  if (s == "sin") return Elementary::sin;
  if (s == "cos") return Elementary::cos;
  if (s == "exp") return Elementary::exp;
  if (s == "ln") return Elementary::ln;
  if (s == "sqrt") return Elementary::sqrt;
  return std::nullopt;
}

/// Index named by a coordinate identifier (x, y, z, x<digits>) or 0 if the
/// identifier does not have that shape. Range checks are done by the caller.
inline long coordinate_index(std::string_view s, int dim) {
  if (dim <= 3 && s.size() == 1 && (s[0] == 'x' || s[0] == 'y' || s[0] == 'z')) return s[0] - 'x' + 1;
  if (s.size() >= 2 && s[0] == 'x') {
    long v = 0;
    for (char c : s.substr(1)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return 0;
      v = v * 10 + (c - '0');
      if (v > 1'000'000) return v;
    }
    return v == 0 ? -1 : v;
  }
  return 0;
}

/// A term of a form expression: coefficient times an ordered list of
/// differentials (possibly unsorted, possibly repeated).
struct FormTerm {
  NodePtr coefficient;
  std::vector<int> differentials;
  int line = 1;
  int column = 1;
};

class Parser {
 public:
  Parser(std::string_view src, int dim, bool forms) : tokens_(tokenize(src)), dim_(dim), forms_(forms) {}

  NodePtr parse_scalar_expression() {
    if (peek().kind == Tok::end) fail("empty expression");
    NodePtr e = expr();
    expect_end();
    return e;
  }

  std::vector<FormTerm> parse_form_terms() {
    if (peek().kind == Tok::end) fail("empty form expression");
    std::vector<FormTerm> terms;
    bool negative = false;
    if (peek().kind == Tok::minus && starts_differential(1)) {
      negative = true;
      next();
    }
    terms.push_back(form_term(negative));
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      negative = next().kind == Tok::minus;
      terms.push_back(form_term(negative));
    }
    expect_end();
    return terms;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { fail(msg, peek()); }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, at.line, at.column); }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what + describe_found());
    next();
  }
  void expect_end() {
    if (peek().kind != Tok::end) fail("unexpected " + describe(peek()));
  }

  std::string describe_found() const { return ", found " + describe(peek()); }
  static std::string describe(const Token& t) {
    return t.kind == Tok::end ? std::string("end of input") : "'" + t.text + "'";
  }

  // Differential identifiers: dx, dy, dz (dim <= 3) and dx<digits>.
  std::optional<int> differential_index(const Token& t) const {
    if (!forms_ || t.kind != Tok::ident || t.text.size() < 2 || t.text[0] != 'd') return std::nullopt;
    long idx = coordinate_index(std::string_view(t.text).substr(1), dim_);
    if (idx == 0) return std::nullopt;
    if (idx < 0) fail("differential index must be at least 1", t);
    if (idx > dim_) fail("differential " + t.text + " exceeds dimension " + std::to_string(dim_), t);
    return static_cast<int>(idx);
  }
  bool starts_differential(std::size_t ahead) const { return differential_index(peek(ahead)).has_value(); }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      Op op = next().kind == Tok::plus ? Op::add : Op::sub;
      lhs = ast::raw_binary(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      if (forms_ && peek().kind == Tok::star && starts_differential(1)) break;
      Op op = next().kind == Tok::star ? Op::mul : Op::div;
      lhs = combine(op, lhs, factor());
    }
    return lhs;
  }

  static NodePtr combine(Op op, NodePtr a, NodePtr b) {
    if (op == Op::div && ast::is_constant(a) && ast::is_constant(b) && !a->value.is_float && !b->value.is_float &&
        !b->value.is_zero())
      return ast::constant(Rational(a->value.exact / b->value.exact));
    return ast::raw_binary(op, std::move(a), std::move(b));
  }

  NodePtr factor() {
    if (peek().kind == Tok::minus) {
      next();
      NodePtr inner = factor();
      if (ast::is_constant(inner)) return ast::negate(inner);
      return ast::raw_neg(inner);
    }
    NodePtr base = atom();
    if (peek().kind == Tok::power) {
      next();
      const Token& t = peek();
      if (t.kind != Tok::number || t.is_float) fail("expected a nonnegative integer exponent" + describe_found());
      if (t.text.size() > 6) fail("exponent too large", t);
      unsigned k = static_cast<unsigned>(std::stoul(t.text));
      next();
      return ast::raw_pow(base, k);
    }
    return base;
  }

  NodePtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: {
        next();
        if (t.is_float) return ast::constant(Literal::floating(std::stod(t.text)));
        return ast::constant(Rational(mpz_class(t.text, 10)));
      }
      case Tok::lparen: {
        next();
        NodePtr e = expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident: {
        if (auto f = function_named(t.text)) {
          next();
          expect(Tok::lparen, "'(' after function name");
          NodePtr arg = expr();
          expect(Tok::rparen, "')'");
          return ast::apply(*f, arg);
        }
        if (differential_index(t)) fail("differential " + t.text + " is only allowed as a trailing factor of a form term", t);
        long idx = coordinate_index(t.text, dim_);
        if (idx < 0) fail("variable index must be at least 1", t);
        if (idx > dim_) fail("variable " + t.text + " index exceeds dimension " + std::to_string(dim_), t);
        if (idx == 0) fail("unknown identifier " + t.text, t);
        next();
        return ast::variable(static_cast<int>(idx));
      }
      default:
        fail("expected a number, variable, function or '('" + describe_found());
    }
  }

  FormTerm form_term(bool negative) {
    FormTerm ft;
    ft.line = peek().line;
    ft.column = peek().column;
    if (starts_differential(0)) {
      ft.coefficient = ast::constant(1);
    } else {
      ft.coefficient = term();
      if (peek().kind == Tok::star && starts_differential(1)) {
        next();
      } else {
        if (negative) ft.coefficient = ast::negate(ft.coefficient);
        return ft;
      }
    }
    ft.differentials.push_back(*differential_index(next()));
    while (peek().kind == Tok::caret) {
      next();
      auto idx = differential_index(peek());
      if (!idx) fail("expected a differential after '^'" + describe_found());
      next();
      ft.differentials.push_back(*idx);
    }
    if (negative) ft.coefficient = ast::negate(ft.coefficient);
    return ft;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int dim_;
  bool forms_;
};

}  // namespace parsing

/// Parses a scalar field on R^dim. Throws ParseError with the position of the
/// offending token.
inline ScalarField parse_scalar(std::string_view text, int dim) {
  if (dim < 1) throw DimensionError("dimension must be at least 1");
  parsing::Parser p(text, dim, false);
  return ScalarField{dim, p.parse_scalar_expression()};
}

}  // namespace nilforms
