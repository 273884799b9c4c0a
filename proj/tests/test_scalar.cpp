#include <doctest.h>

#include <random>

#include "qdop/error.hpp"
#include "qdop/scalar.hpp"

using namespace qdop;

namespace {

ParamField field_q() { return ParamField({"q"}); }
ParamField field_qr() { return ParamField({"q", "r", "s"}); }

Scalar S(const char* text, const ParamField& f) { return parse_scalar(text, f); }

}  // namespace

TEST_CASE("scalar normal form cancels common factors") {
  auto f = field_q();
  CHECK(S("(q^2 - 1)/(q - 1)", f) == S("q + 1", f));
  CHECK(render(S("(q^2 - 1)/(q - 1)", f), f) == "q + 1");
  CHECK(render(S("1/(q-1)", f), f) == "1/(q - 1)");
  CHECK(render(S("-1/(2*q-2)", f), f) == "-1/2/(q - 1)");
  CHECK(render(S("(q^3-q)/(q^2)", f), f) == "(q^2 - 1)/q");
  CHECK(S("q - q", f).is_zero());
  CHECK(S("2/4", f) == Scalar(Rational(1, 2)));
}

TEST_CASE("scalar round trip through text") {
  auto f = field_qr();
  const char* samples[] = {"q", "q*r - s^2/3", "(q+r)^3/(q*s - r^2)", "1/(q*r)", "-7/3",
                           "(q - 1)/(q + 1) + r/(q - 1)"};
  for (const char* s : samples) {
    Scalar a = S(s, f);
    CHECK(parse_scalar(render(a, f), f) == a);
  }
}

TEST_CASE("multivariate gcd on products of random factors") {
  auto f = field_qr();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 3), ex(0, 2);
  auto rand_poly = [&](int terms) {
    std::vector<Poly::Term> t;
    for (int i = 0; i < terms; ++i) {
      Monomial::Storage e{ex(rng), ex(rng), ex(rng)};
      t.push_back({Monomial(e), Rational(coef(rng))});
    }
    t.push_back({Monomial::variable(static_cast<std::size_t>(ex(rng))), 1});
    return Poly::from_terms(t);
  };
  for (int trial = 0; trial < 30; ++trial) {
    Poly a = rand_poly(3), b = rand_poly(3), c = rand_poly(2);
    if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
    Poly g = gcd(a * c, b * c);
    auto q = exact_div(g, gcd(c, c));
    REQUIRE(q.has_value());
    CHECK(exact_div(a * c, g).has_value());
    CHECK(exact_div(b * c, g).has_value());
    Scalar s = Scalar::fraction(a * c, b * c);
    CHECK(s * Scalar::fraction(b, a) == Scalar(1));
  }
}

TEST_CASE("field axioms on random rational functions") {
  auto f = field_qr();
  std::mt19937 rng(11);
  const char* atoms[] = {"q", "r", "s", "q - 1", "q*r + 1", "1/(q+s)", "r^2/(q - r)", "3/2"};
  auto pick = [&] { return S(atoms[rng() % 8], f); };
  for (int i = 0; i < 60; ++i) {
    Scalar a = pick() * pick() + pick(), b = pick() - pick() * pick(), c = pick();
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Scalar());
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}

TEST_CASE("q-numbers") {
  auto f = field_q();
  Scalar q = f.param(0);
  CHECK(q_number(0, q).is_zero());
  CHECK(q_number(3, q) == S("1 + q + q^2", f));
  CHECK(q_number(-2, q) == S("-1/q - 1/q^2", f));
  CHECK(q_number(5, Scalar(1)) == Scalar(5));
  CHECK(q_number(4, q) == S("(q^4 - 1)/(q - 1)", f));
}

TEST_CASE("specialization") {
  auto f = field_q();
  Scalar s = S("(q^2 + 1)/(q - 2)", f);
  Rational three = 3;
  CHECK(specialize(s, std::span<const Rational>(&three, 1)) == 10);
  Rational two = 2;
  CHECK_THROWS_AS(specialize(s, std::span<const Rational>(&two, 1)), DenominatorVanishes);
  uint32_t p3 = 3;
  CHECK(specialize_mod(s, std::span<const uint32_t>(&p3, 1), 101) == 10u);
}

TEST_CASE("pinned parameters") {
  ParamField f({"q"});
  f.pin(0, 5);
  CHECK(S("q^2 - 1", f) == Scalar(24));
  CHECK(f.power(0, -2) == Scalar(Rational(1, 25)));
}

TEST_CASE("parse errors carry positions") {
  auto f = field_q();
  try {
    parse_scalar("q + * 2", f);
    FAIL("no throw");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse_scalar("z", f), SyntaxError);
  CHECK_THROWS_AS(parse_scalar("1/(q-q)", f), SyntaxError);
  CHECK_THROWS_AS(Scalar() .inverse(), DivisionByZero);
}

TEST_CASE("arithmetic examples") {
  auto f = field_q();
  CHECK(S("q - 1", f) / S("q - 1", f) == Scalar(1));
  CHECK(S("q^2 - 1", f) / S("q - 1", f) == S("q + 1", f));
  CHECK(S("(1/2)*q", f) + S("(1/2)*q", f) == f.param(0));
  CHECK(render(S("(q^2 - 1)/(q - 1)", f), f) == "q + 1");
  CHECK_THROWS_AS(f.param(0) / Scalar(), DivisionByZero);
  CHECK(q_number(4, f.param(0).inverse()) == S("1 + 1/q + 1/q^2 + 1/q^3", f));
}

TEST_CASE("q-number telescopes for several bases") {
  auto f = field_q();
  Scalar q = f.param(0);
  for (const Scalar& m : {q, q.inverse(), q * q})
    for (int64_t n = 0; n <= 20; ++n) CHECK(q_number(n, m) * (m - Scalar(1)) == m.pow(n) - Scalar(1));
}

TEST_CASE("specialization is a ring homomorphism") {
  ParamField f({"q_12", "q_13", "q_23"});
  std::mt19937 rng(17);
  const char* atoms[] = {"q_12", "q_13 + 2", "1/q_23", "q_12*q_13 - 3", "(q_23 + 1)/(q_12 - 7)"};
  Rational pt[] = {Rational(3), Rational(5), Rational(11, 2)};
  for (int i = 0; i < 30; ++i) {
    Scalar a = S(atoms[rng() % 5], f), b = S(atoms[rng() % 5], f);
    CHECK(specialize(a * b, pt) == specialize(a, pt) * specialize(b, pt));
    CHECK(specialize(a + b, pt) == specialize(a, pt) + specialize(b, pt));
  }
  CHECK(specialize(S("q_12/q_13", f), pt) == Rational(3, 5));
  CHECK(specialize(S("1 + q_12 + q_12^2", f), pt) == 13);
}
