#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fec/polynomial.hpp"

#include <cmath>
#include <random>

using fec::Polynomial;
using fec::Rational;
using fec::VariableNames;

namespace {

const Polynomial Y1 = Polynomial::variable(0);
const Polynomial Y2 = Polynomial::variable(1);
const Polynomial one = Polynomial::constant(Rational(1));

Polynomial random_poly(std::mt19937_64& rng, int vars, int max_degree, int terms) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<int> exp(0, max_degree);
  Polynomial p;
  for (int t = 0; t < terms; ++t) {
    fec::Monomial m(static_cast<size_t>(vars), 0);
    int budget = max_degree;
    for (int v = 0; v < vars; ++v) {
      const int e = std::min(budget, exp(rng));
      m[static_cast<size_t>(v)] = static_cast<uint32_t>(e);
      budget -= e;
    }
    int c = coeff(rng);
    if (c == 0) c = 2;
    p.add_term(std::move(m), Rational(c, den(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("addition normalizes to term-map normal form") {
  CHECK(Y1 + (-Y1) == Polynomial());
  CHECK((Y1 + (-Y1)).is_zero());
  const Polynomial sum = Y1 * Y1 + Y1 * Y2;
  CHECK(sum.terms().size() == 2);
  const Polynomial a = Rational(2) * Y1 + one;
  const Polynomial b = Rational(3) * Y1 - one;
  CHECK(a + b == Rational(5) * Y1);
}

TEST_CASE("multiplication distributes over exponent vectors") {
  CHECK(Y1 * one == Y1);
  CHECK((Y1 + Y2) * (Y1 - Y2) == Y1 * Y1 - Y2 * Y2);
  CHECK((Y1 + one) * (Y1 + one) == Y1 * Y1 + Rational(2) * Y1 + one);
}

TEST_CASE("formal partial derivatives") {
  CHECK((Y1 * Y1).partial(0) == Rational(2) * Y1);
  CHECK((Y1 * Y2).partial(1) == Y1);
  CHECK((Y2 * Y2 * Y2).partial(0) == Polynomial());
}

TEST_CASE("evaluation") {
  const Polynomial p = Y1 * Y1 + Y2;
  CHECK(p.eval({2.0, 3.0}) == doctest::Approx(7.0));

  // F(0) = 0 for polynomials with no constant term.
  const Polynomial q = Rational(3) * Y1 * Y2 + Y2 * Y2;
  CHECK(q.eval({0.0, 0.0}) == 0.0);

  const Polynomial prod = (Y1 + Y2) * (Y1 - Y2);
  CHECK(prod.eval({3.0, 1.0}) == doctest::Approx(8.0));
  CHECK(prod.eval({3.0, 1.0}) == doctest::Approx((Y1 * Y1 - Y2 * Y2).eval({3.0, 1.0})));

  CHECK_THROWS_AS(p.eval({1.0}), std::invalid_argument);  // Y2 unbound
}

TEST_CASE("hessian") {
  const auto h1 = (Y1 * Y1).hessian({0, 1});
  CHECK(h1[0][0] == Polynomial::constant(Rational(2)));
  CHECK(h1[0][1] == Polynomial());
  CHECK(h1[1][1] == Polynomial());

  const auto h2 = (Y1 * Y2).hessian({0, 1});
  CHECK(h2[0][1] == one);
  CHECK(h2[1][0] == one);
  CHECK(h2[0][0] == Polynomial());

  const auto h3 = (Rational(5) * Y1 - Rational(2) * Y2).hessian({0, 1});
  for (const auto& row : h3)
    for (const auto& entry : row) CHECK(entry.is_zero());
}

TEST_CASE("partials commute up to degree 6") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Polynomial p = random_poly(rng, 3, 6, 6);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) CHECK(p.partial(i).partial(j) == p.partial(j).partial(i));
  }
}

TEST_CASE("formal Leibniz rule is exact") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4, 5);
    const Polynomial q = random_poly(rng, 3, 4, 5);
    for (int i = 0; i < 3; ++i) CHECK((p * q).partial(i) == p.partial(i) * q + p * q.partial(i));
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Polynomial p = random_poly(rng, 3, 4, 4);
    const Polynomial q = random_poly(rng, 3, 4, 4);
    const double x[3] = {dist(rng), dist(rng), dist(rng)};
    const std::span<const double> sp(x, 3);
    CHECK(std::abs((p * q).eval(sp) - p.eval(sp) * q.eval(sp)) <=
          1e-12 * (1.0 + std::abs(p.eval(sp) * q.eval(sp))));
    CHECK(std::abs((p + q).eval(sp) - (p.eval(sp) + q.eval(sp))) <=
          1e-12 * (1.0 + std::abs(p.eval(sp)) + std::abs(q.eval(sp))));
  }
}

TEST_CASE("text form parses and prints") {
  const VariableNames names = VariableNames::prefixed("y");
  const Polynomial p = fec::parse_polynomial("3/2*y1^2*y2 - 1*y3", names);
  Polynomial expected = Rational(3, 2) * Y1 * Y1 * Y2 - Polynomial::variable(2);
  CHECK(p == expected);

  CHECK(fec::parse_polynomial("y1", names) == Y1);
  CHECK(fec::parse_polynomial("-y1^2 + y1^2", names).is_zero());
  CHECK(fec::parse_polynomial("5", names) == Polynomial::constant(Rational(5)));
  CHECK(fec::parse_polynomial("  2 * y1 ^ 2 ", names) == Rational(2) * Y1 * Y1);

  // Round trip through the printer.
  const std::string text = fec::to_string(p, names);
  CHECK(fec::parse_polynomial(text, names) == p);
  CHECK(fec::to_string(Polynomial(), names) == "0");

  const VariableNames h = VariableNames::heisenberg();
  CHECK(fec::parse_polynomial("xi^2 + eta^2", h) == Y1 * Y1 + Y2 * Y2);
  CHECK(fec::parse_polynomial("1/2*zeta", h) == Rational(1, 2) * Polynomial::variable(2));
}

TEST_CASE("parse errors") {
  const VariableNames names = VariableNames::prefixed("y");
  CHECK_THROWS_AS(fec::parse_polynomial("", names), std::invalid_argument);
  CHECK_THROWS_AS(fec::parse_polynomial("y0", names), std::invalid_argument);
  CHECK_THROWS_AS(fec::parse_polynomial("z1 + 2", names), std::invalid_argument);
  CHECK_THROWS_AS(fec::parse_polynomial("1/0", names), std::invalid_argument);
  CHECK_THROWS_AS(fec::parse_polynomial("2**y1", names), std::invalid_argument);
  CHECK_THROWS_AS(fec::parse_polynomial("y1 y2", names), std::invalid_argument);
}
