#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nilforms/nilforms.hpp"
#include "oracles.hpp"

using namespace nilforms;
using W = Weil<Rational>;

namespace {

VectorField3 field3(const char* f, const char* g, const char* h) {
  return VectorField3{{parse_scalar(f, 3), parse_scalar(g, 3), parse_scalar(h, 3)}};
}

// Compares a computed field with a reference at random rational points.
void check_agrees(const ScalarField& got, const ScalarField& want, std::mt19937_64& rng, int points = 10) {
  for (int s = 0; s < points; ++s) {
    auto x = oracle::random_rationals(3, rng);
    CHECK(eval_field<Rational>(got, x) == eval_field<Rational>(want, x));
  }
}

}  // namespace

TEST_CASE("x dy over the unit square at the origin", "[stokes]") {
  auto w = parse_form("x*dy", 3).form;
  auto r = verify<Rational>(w, {0, 0, 0}, {{1, 0, 0}, {0, 1, 0}});
  CHECK(r.pass);
  CHECK(r.lhs == W::from_terms(2, {{Monomial::of({1, 2}), Rational(1)}}));
  CHECK(r.rhs == r.lhs);
  CHECK(r.top_residual == 0);
  CHECK(r.lower_order_max == 0);
}

TEST_CASE("for a 0-form the boundary integral is a first difference", "[stokes]") {
  auto phi = parse_form("x**3 - y*z", 3).form;
  Vector<Rational> x{1, 2, -1}, a{2, -1, 3};
  auto lhs = integral_chain(phi, boundary(marked<Rational>(x, {a})), 1);
  std::vector<W> moved;
  for (int c = 0; c < 3; ++c) moved.push_back(W::constant(x[c], 1) + W::generator(1, 1) * a[c]);
  auto expected = eval_field<W>(phi.coefficient({}), moved) - W::constant(eval_field<Rational>(phi.coefficient({}), x), 1);
  CHECK(lhs == expected);
  // phi'(x)(a) = 3x^2 a1 - z a2 - y a3 = 6 - 1 - 6
  CHECK(lhs == W::generator(1, 1) * Rational(-1));
}

TEST_CASE("random polynomial forms satisfy Stokes exactly", "[stokes][property]") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 5;
    std::uniform_int_distribution<int> kd(0, n - 1);
    const int k = kd(rng);
    auto w = random_form(n, k, rng);
    auto r = verify<Rational>(w, random_point<Rational>(n, rng), random_tangents<Rational>(n, k + 1, rng));
    CHECK(r.pass);
    CHECK(r.top_residual == 0);
  }
}

TEST_CASE("a wrong derivative is caught", "[stokes]") {
  auto w = parse_form("x*dy", 3).form;
  auto r = verify_against<Rational>(w, parse_form("2*dx^dy", 3).form, {0, 0, 0}, {{1, 0, 0}, {0, 1, 0}});
  CHECK_FALSE(r.pass);
  CHECK(r.top_residual == 1);
}

TEST_CASE("verify rejects mismatched shapes", "[stokes]") {
  auto w = parse_form("x*dy", 3).form;
  CHECK_THROWS_AS(verify<Rational>(w, {0, 0, 0}, {{1, 0, 0}}), DimensionError);
  CHECK_THROWS_AS(verify<Rational>(parse_form("dx^dy^dz", 3).form, {0, 0, 0}, {}), DimensionError);
}

TEST_CASE("float verification with transcendental coefficients", "[stokes][float]") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 4;
    std::uniform_int_distribution<int> kd(0, n - 1);
    const int k = kd(rng);
    auto w = random_form(n, k, rng, FieldPool::transcendental);
    auto r = verify<double>(w, random_point<double>(n, rng), random_tangents<double>(n, k + 1, rng));
    CHECK(r.pass);
  }
}

TEST_CASE("scaling the tangents scales both sides by the product", "[stokes][property]") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    std::uniform_int_distribution<int> kd(0, 2);
    const int k = kd(rng);
    auto w = random_form(n, k, rng);
    auto x = random_point<Rational>(n, rng);
    auto t = random_tangents<Rational>(n, k + 1, rng);
    auto lambda = oracle::random_rationals(k + 1, rng);
    Rational prod = 1;
    auto scaled = t;
    for (int j = 0; j <= k; ++j) {
      prod *= lambda[j];
      for (auto& c : scaled[j]) c *= lambda[j];
    }
    auto a = verify<Rational>(w, x, t), b = verify<Rational>(w, x, scaled);
    const Monomial top = Monomial::top(k + 1);
    CHECK(b.lhs.coefficient(top) == prod * a.lhs.coefficient(top));
    CHECK(b.rhs.coefficient(top) == prod * a.rhs.coefficient(top));
  }
}

TEST_CASE("grad examples", "[stokes][vcalc]") {
  CHECK(to_string(grad(parse_scalar("1", 3))) == "(0, 0, 0)");
  CHECK(to_string(grad(parse_scalar("x**2*y", 3))) == "(2*x*y, x**2, 0)");
  CHECK(to_string(grad(parse_scalar("x + y + z", 3))) == "(1, 1, 1)");
}

TEST_CASE("curl examples", "[stokes][vcalc]") {
  std::mt19937_64 rng(54);
  CHECK(to_string(curl(field3("-y", "x", "0"))) == "(0, 0, 2)");
  auto c = curl(field3("y*z**2", "x**3", "x + y + z"));
  check_agrees(c.components[0], parse_scalar("1", 3), rng);
  check_agrees(c.components[1], parse_scalar("2*y*z - 1", 3), rng);
  check_agrees(c.components[2], parse_scalar("3*x**2 - z**2", 3), rng);
}

TEST_CASE("div examples", "[stokes][vcalc]") {
  CHECK(to_string(div(field3("x", "y", "z"))) == "3");
  std::mt19937_64 rng(55);
  check_agrees(div(field3("y*z", "z*x", "x*y")), parse_scalar("0", 3), rng);
}

TEST_CASE("divergence carries a plus sign on every partial", "[stokes][vcalc][regression]") {
  // Each component contributes with +1: div(x, 0, 0) = div(0, y, 0) = div(0, 0, z) = 1.
  CHECK(to_string(div(field3("x", "0", "0"))) == "1");
  CHECK(to_string(div(field3("0", "y", "0"))) == "1");
  CHECK(to_string(div(field3("0", "0", "z"))) == "1");
  CHECK(to_string(div(field3("0", "-y", "0"))) == "-1");
  // The same convention holds on the microcube: flux of (x, y, z) through the unit cube is 3 e1 e2 e3.
  auto w = flux_form(field3("x", "y", "z"));
  auto r = verify<Rational>(w, {0, 0, 0}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(r.pass);
  CHECK(r.lhs == W::from_terms(3, {{Monomial::top(3), Rational(3)}}));
}

TEST_CASE("the dictionary agrees with the component formulas", "[stokes][vcalc][property]") {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 30; ++trial) {
    oracle::Poly f = oracle::random_poly(3, rng), g = oracle::random_poly(3, rng), h = oracle::random_poly(3, rng);
    VectorField3 F{{parse_scalar(f.text(), 3), parse_scalar(g.text(), 3), parse_scalar(h.text(), 3)}};
    auto c = curl(F);
    auto dv = div(F);
    auto gr = grad(F.components[0]);
    for (int s = 0; s < 5; ++s) {
      auto x = oracle::random_rationals(3, rng);
      CHECK(eval_field<Rational>(c.components[0], x) == (h.derivative(2) - g.derivative(3))(x));
      CHECK(eval_field<Rational>(c.components[1], x) == (f.derivative(3) - h.derivative(1))(x));
      CHECK(eval_field<Rational>(c.components[2], x) == (g.derivative(1) - f.derivative(2))(x));
      CHECK(eval_field<Rational>(dv, x) == (f.derivative(1) + g.derivative(2) + h.derivative(3))(x));
      for (int i = 0; i < 3; ++i) CHECK(eval_field<Rational>(gr.components[i], x) == f.derivative(i + 1)(x));
    }
  }
}

TEST_CASE("curl of grad and div of curl vanish", "[stokes][vcalc][property]") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = random_field(3, rng);
    VectorField3 G{{random_field(3, rng), random_field(3, rng), random_field(3, rng)}};
    auto cg = curl(grad(phi));
    auto dc = div(curl(G));
    for (int s = 0; s < 20; ++s) {
      auto x = oracle::random_rationals(3, rng);
      for (const auto& comp : cg.components) CHECK(eval_field<Rational>(comp, x) == 0);
      CHECK(eval_field<Rational>(dc, x) == 0);
    }
  }
}

TEST_CASE("flux pairing examples", "[stokes][vcalc]") {
  auto one = flux_pairing<Rational>(field3("1", "0", "0"), {0, 0, 0}, {0, 1, 0}, {0, 0, 1});
  CHECK(one.via_form == 1);
  CHECK(one.via_triple_product == 1);
  auto flat = flux_pairing<Rational>(field3("x", "y*z", "2"), {1, 2, 3}, {1, 2, 3}, {1, 2, 3});
  CHECK(flat.via_form == 0);
  auto three = flux_pairing<Rational>(field3("1", "2", "3"), {5, 5, 5}, {1, 0, 0}, {0, 1, 0});
  CHECK(three.via_form == 3);
  CHECK(three.via_triple_product == 3);
}

TEST_CASE("flux pairing matches the triple product", "[stokes][vcalc][property]") {
  std::mt19937_64 rng(58);
  for (int trial = 0; trial < 30; ++trial) {
    VectorField3 F{{random_field(3, rng), random_field(3, rng), random_field(3, rng)}};
    auto x = oracle::random_rationals(3, rng), a = oracle::random_rationals(3, rng), b = oracle::random_rationals(3, rng);
    auto p = flux_pairing<Rational>(F, x, a, b);
    CHECK(p.via_form == p.via_triple_product);
  }
}

TEST_CASE("sweep defaults pass with zero residual", "[stokes][sweep]") {
  auto s = sweep(SweepConfig{});
  CHECK(s.passed());
  REQUIRE(s.degrees.size() == 3);
  for (const auto& d : s.degrees) {
    CHECK(d.trials == 50);
    CHECK(d.max_top_residual == 0);
    CHECK(d.max_lower_order == 0);
  }
}

TEST_CASE("sweep configuration errors", "[stokes][sweep]") {
  SweepConfig c;
  c.trials = 0;
  CHECK_THROWS_AS(sweep(c), Error);
  c = SweepConfig{};
  c.degrees = {3};
  CHECK_THROWS_AS(sweep(c), Error);
  c = SweepConfig{};
  c.dim = 7;
  CHECK_THROWS_AS(sweep(c), Error);
  c = SweepConfig{};
  c.pool = FieldPool::transcendental;
  CHECK_THROWS_AS(sweep(c), Error);
}

TEST_CASE("sweep is deterministic in the seed", "[stokes][sweep]") {
  SweepConfig c;
  c.trials = 5;
  c.backend = Backend::float64;
  c.pool = FieldPool::transcendental;
  auto a = sweep(c), b = sweep(c);
  REQUIRE(a.degrees.size() == b.degrees.size());
  for (std::size_t i = 0; i < a.degrees.size(); ++i) {
    CHECK(a.degrees[i].max_top_residual == b.degrees[i].max_top_residual);
    CHECK(a.degrees[i].max_extraction_error == b.degrees[i].max_extraction_error);
  }
  CHECK(a.passed());
}
