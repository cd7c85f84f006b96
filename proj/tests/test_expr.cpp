#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nilforms/expr.hpp"
#include "nilforms/parser.hpp"
#include "oracles.hpp"

using namespace nilforms;

namespace {

std::string round_trip(const std::string& text, int dim) { return to_string(parse_scalar(text, dim)); }

ScalarField field_of(const oracle::Poly& p) { return parse_scalar(p.text(), p.n); }

}  // namespace

TEST_CASE("printing is canonical for simple inputs", "[expr][parser]") {
  CHECK(round_trip("x**2*y + sin(z)", 3) == "x**2*y + sin(z)");
  CHECK_THROWS_AS(round_trip("x^2", 3), ParseError);
  CHECK(round_trip("  x  +y", 3) == "x + y");
  CHECK(round_trip("x - (y - z)", 3) == "x - (y - z)");
  CHECK(round_trip("(x - y) - z", 3) == "x - y - z");
  CHECK(round_trip("x / (y * z)", 3) == "x/(y*z)");
  CHECK(round_trip("-x**2", 3) == "-x**2");
  CHECK(round_trip("(-x)**2", 3) == "(-x)**2");
  CHECK(round_trip("x1 + x4", 5) == "x1 + x4");
  CHECK(round_trip("1/2*x", 3) == "1/2*x");
  CHECK(round_trip("0.5*x", 3) == "0.5*x");
}

TEST_CASE("printed text parses back to the same tree", "[expr][parser][property]") {
  const char* inputs[] = {"x**2*y + sin(z)", "-(x + y)*z", "x - -y", "exp(x/3) - cos(-y)", "sqrt(x**2 + 1)/ln(2 + y)",
                          "2*(x*y)**3", "x - y*(-z)", "-3/4*x + 7", "(x + y)/(y - z)/z"};
  for (const char* s : inputs) {
    auto f = parse_scalar(s, 3);
    auto g = parse_scalar(to_string(f), 3);
    INFO(s << " -> " << to_string(f));
    CHECK(same_tree(f.root, g.root));
  }
}

TEST_CASE("random polynomials round-trip through text", "[expr][parser][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    auto f = field_of(oracle::random_poly(n, rng));
    CHECK(same_tree(f.root, parse_scalar(to_string(f), n).root));
  }
}

TEST_CASE("parse errors carry a position", "[expr][parser]") {
  try {
    parse_scalar("x + * y", 3);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 5);
  }
  CHECK_THROWS_AS(parse_scalar("q + x", 3), ParseError);
  CHECK_THROWS_AS(parse_scalar("x4", 3), ParseError);
  CHECK_THROWS_AS(parse_scalar("sin x", 3), ParseError);
  CHECK_THROWS_AS(parse_scalar("(x + y", 3), ParseError);
  CHECK_THROWS_AS(parse_scalar("", 3), ParseError);
  CHECK_THROWS_AS(parse_scalar("x $ y", 3), ParseError);
  CHECK_THROWS_WITH(parse_scalar("x4", 3), Catch::Matchers::ContainsSubstring("exceeds dimension 3"));
}

TEST_CASE("x, y, z are only aliases up to dimension 3", "[expr][parser]") {
  CHECK_THROWS_AS(parse_scalar("y", 4), ParseError);
  CHECK(to_string(parse_scalar("x2", 3)) == "y");
}

TEST_CASE("symbolic derivative examples", "[expr][diff]") {
  CHECK(to_string(diff_symbolic(parse_scalar("x**2*y", 3), 1)) == "2*x*y");
  CHECK(to_string(diff_symbolic(parse_scalar("x**2*y", 3), 3)) == "0");
  CHECK(to_string(diff_symbolic(parse_scalar("sin(x)", 3), 1)) == "cos(x)");
  CHECK(to_string(diff_symbolic(parse_scalar("5", 3), 2)) == "0");
}

TEST_CASE("symbolic derivative agrees with the polynomial oracle", "[expr][diff][property]") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + trial % 5;
    auto p = oracle::random_poly(n, rng);
    auto f = field_of(p);
    for (int i = 1; i <= n; ++i) {
      auto df = diff_symbolic(f, i);
      auto dp = p.derivative(i);
      for (int s = 0; s < 3; ++s) {
        auto x = oracle::random_rationals(n, rng);
        CHECK(eval_field<Rational>(df, x) == dp(x));
      }
    }
  }
}

TEST_CASE("evaluation on x + e_1 carries the derivative", "[expr][eval][property]") {
  std::mt19937_64 rng(13);
  using W = Weil<Rational>;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    auto p = oracle::random_poly(n, rng);
    auto f = field_of(p);
    auto x = oracle::random_rationals(n, rng);
    for (int i = 1; i <= n; ++i) {
      std::vector<W> point;
      for (int c = 0; c < n; ++c) point.push_back(W::constant(x[c], 1) + (c + 1 == i ? W::generator(1, 1) : W::constant(0, 1)));
      auto v = eval_field<W>(f, point);
      CHECK(v.real() == p(x));
      CHECK(v.coefficient(Monomial::of({1})) == p.derivative(i)(x));
    }
  }
}

TEST_CASE("evaluation is a ring homomorphism on Weil points", "[expr][eval][property]") {
  std::mt19937_64 rng(14);
  using W = Weil<Rational>;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    auto p = oracle::random_poly(n, rng), q = oracle::random_poly(n, rng);
    std::vector<W> point;
    for (int c = 0; c < n; ++c) point.push_back(oracle::random_weil(3, rng));
    auto fp = field_of(p), fq = field_of(q);
    auto sum = ScalarField{n, ast::raw_binary(Op::add, fp.root, fq.root)};
    auto prod = ScalarField{n, ast::raw_binary(Op::mul, fp.root, fq.root)};
    CHECK(eval_field<W>(sum, point) == eval_field<W>(fp, point) + eval_field<W>(fq, point));
    CHECK(eval_field<W>(prod, point) == eval_field<W>(fp, point) * eval_field<W>(fq, point));
  }
}

TEST_CASE("float evaluation of transcendental fields", "[expr][eval]") {
  auto f = parse_scalar("sin(x)*exp(y) - sqrt(z)", 3);
  std::vector<double> p{0.4, -0.2, 2.0};
  CHECK(eval_field<double>(f, p) == Catch::Approx(std::sin(0.4) * std::exp(-0.2) - std::sqrt(2.0)));
}

TEST_CASE("evaluation errors", "[expr][eval]") {
  auto f = parse_scalar("x + y", 3);
  std::vector<double> short_point{1.0};
  CHECK_THROWS_AS(eval_field<double>(f, short_point), DimensionError);
  std::vector<Rational> zero{0, 0, 0};
  CHECK_THROWS_AS(eval_field<Rational>(parse_scalar("1/x", 3), zero), DomainError);
  std::vector<Rational> one{1, 1, 1};
  CHECK_THROWS_AS(eval_field<Rational>(parse_scalar("sin(x)", 3), one), DomainError);
  CHECK_THROWS_AS(eval_field<Rational>(parse_scalar("0.5*x", 3), one), DomainError);
  std::vector<double> neg{-1.0, 0.0, 0.0};
  CHECK_THROWS_AS(eval_field<double>(parse_scalar("ln(x)", 3), neg), DomainError);
}

TEST_CASE("rational and decimal literals parse exactly", "[expr]") {
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("1e-2") == Rational(1, 100));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
}

TEST_CASE("smart builders fold and absorb signs", "[expr]") {
  using namespace ast;
  auto x = variable(1);
  CHECK(same_tree(sum(constant(0), x), x));
  CHECK(same_tree(product(constant(1), x), x));
  CHECK(is_zero(product(constant(0), x)));
  CHECK(same_tree(negate(negate(x)), x));
  CHECK(to_string(difference(x, negate(variable(2))), 3) == "x + y");
  CHECK(to_string(sum(x, negate(variable(2))), 3) == "x - y");
  CHECK(to_string(product(constant(2), constant(3)), 3) == "6");
}
