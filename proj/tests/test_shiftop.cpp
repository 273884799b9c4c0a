#include <doctest.h>

#include <random>

#include "qdop/error.hpp"
#include "qdop/shiftop.hpp"

using namespace qdop;

namespace {

struct OneVar {
  ParamFieldPtr f = std::make_shared<const ParamField>(std::vector<std::string>{"q"});
  ModuleSpec poly = ModuleSpec::polynomial(1);
  ModuleSpec laur = ModuleSpec::laurent_all(1);

  ShiftOp op(int32_t shift, const char* coeff, const ModuleSpec& m) const {
    return ShiftOp::single(f, m, IVec{shift}, parse_exppoly(coeff, f, 1));
  }
  ShiftOp x(const ModuleSpec& m) const { return op(1, "1", m); }
  ShiftOp d(const ModuleSpec& m) const { return op(-1, "m", m); }
  ShiftOp d1(const ModuleSpec& m) const { return op(-1, "(q^[m] - 1)/(q - 1)", m); }
  ShiftOp dm1(const ModuleSpec& m) const { return op(-1, "(q^[-m] - 1)/(1/q - 1)", m); }
  ShiftOp s(int a, const ModuleSpec& m) const {
    return op(0, a > 0 ? "q^[m]" : "q^[-m]", m);
  }
  QPolynomial mono(int32_t e, const ModuleSpec& m) const { return QPolynomial::monomial(f, m, IVec{e}); }
};

// Oracle: apply the defining formulas for m and q-numbers directly on a
// one-variable polynomial, independent of ExpPoly.
QPolynomial act_by_formula(char g, const QPolynomial& p, const OneVar& c) {
  QPolynomial r(c.f, p.module());
  Scalar q = c.f->param(0);
  for (const auto& [e, k] : p.terms()) {
    int32_t n = e[0];
    switch (g) {
      case 'x': r.add(IVec{n + 1}, k); break;
      case 'd': if (n != 0) r.add(IVec{n - 1}, k * Scalar(long(n))); break;
      case '1': if (n != 0) r.add(IVec{n - 1}, k * q_number(n, q)); break;
      case 'm': if (n != 0) r.add(IVec{n - 1}, k * q_number(n, q.inverse())); break;
      default: break;
    }
  }
  return r;
}

ShiftOp random_op(std::mt19937& rng, const OneVar& c, const ModuleSpec& m) {
  ShiftOp gens[] = {c.x(m), c.d(m), c.d1(m), c.dm1(m), c.s(1, m), c.s(-1, m)};
  ShiftOp r(c.f, m);
  int terms = 1 + rng() % 3;
  for (int i = 0; i < terms; ++i) {
    ShiftOp w = ShiftOp::identity(c.f, m);
    int len = rng() % 4;
    for (int j = 0; j < len; ++j) w = w * gens[rng() % 6];
    r += w.scaled(Scalar(long(rng() % 5) - 2));
  }
  return r;
}

QPolynomial random_poly(std::mt19937& rng, const OneVar& c, const ModuleSpec& m) {
  QPolynomial p(c.f, m);
  for (int e = 0; e <= 8; ++e)
    if (rng() % 2) p.add(IVec{e}, Scalar(long(rng() % 7) - 3) + c.f->param(0).pow(rng() % 3));
  return p;
}

}  // namespace

TEST_CASE("action on monomials") {
  OneVar c;
  Scalar q = c.f->param(0);
  CHECK(act(c.d1(c.poly), c.mono(3, c.poly)) ==
        QPolynomial::monomial(c.f, c.poly, IVec{2}, parse_scalar("1+q+q^2", *c.f)));
  CHECK(act(c.d(c.poly), c.mono(0, c.poly)).is_zero());
  CHECK(render(act(c.s(1, c.poly), c.mono(5, c.poly)), {"x"}) == "q^5*x^5");

  auto f3 = std::make_shared<const ParamField>(std::vector<std::string>{"q_12", "q_13", "q_23"});
  ModuleSpec r3 = ModuleSpec::polynomial(3);
  ShiftOp del2 = ShiftOp::single(f3, r3, IVec{0, -1, 0}, parse_exppoly("m2*q_23^[m3]", f3, 3));
  QPolynomial out = act(del2, QPolynomial::monomial(f3, r3, IVec{1, 1, 1}));
  CHECK(out == QPolynomial::monomial(f3, r3, IVec{1, 0, 1}, f3->param(2)));
}

TEST_CASE("composition examples") {
  OneVar c;
  Scalar q = c.f->param(0);
  auto id = ShiftOp::identity(c.f, c.poly);
  CHECK(c.d1(c.poly) * c.x(c.poly) - (c.x(c.poly) * c.d1(c.poly)).scaled(q) == id);
  CHECK(c.s(1, c.poly) * c.s(-1, c.poly) == id);
  QPolynomial two = act(c.d(c.poly), act(c.d1(c.poly), c.mono(2, c.poly)));
  CHECK(act(c.d(c.poly) * c.d1(c.poly), c.mono(2, c.poly)) == two);
  CHECK(two == QPolynomial::monomial(c.f, c.poly, IVec{0}, q + Scalar(1)));
}

TEST_CASE("equality examples") {
  OneVar c;
  Scalar q = c.f->param(0);
  CHECK(c.dm1(c.poly) * c.d1(c.poly) == (c.d1(c.poly) * c.dm1(c.poly)).scaled(q));
  CHECK_FALSE(c.d(c.poly) == c.d1(c.poly));
  ShiftOp sigma = ShiftOp::identity(c.f, c.poly) + (c.x(c.poly) * c.d1(c.poly)).scaled(q - Scalar(1));
  CHECK(c.s(1, c.poly) == sigma);
  CHECK_THROWS_AS((void)(c.x(c.poly) == c.x(c.laur)), ContextMismatch);
}

TEST_CASE("domain guard") {
  OneVar c;
  CHECK_FALSE(domain_guard(c.d(c.poly)));
  auto g = domain_guard(c.op(-1, "1", c.poly));
  REQUIRE(g);
  CHECK(g->shift == IVec{-1});
  CHECK(g->var == 0);
  CHECK(g->value == 0);
  CHECK_FALSE(domain_guard(c.d1(c.poly) * c.dm1(c.poly)));
  CHECK_FALSE(domain_guard(c.op(-1, "1", c.laur)));
  CHECK_THROWS_AS(act(c.op(-1, "1", c.poly), c.mono(0, c.poly)), DomainGuardViolation);
  // A two-step shift whose coefficient vanishes only at m = 0 fails at value 1.
  auto g2 = domain_guard(c.op(-2, "m", c.poly));
  REQUIRE(g2);
  CHECK(g2->value == 1);
}

TEST_CASE("action agrees with the defining formulas") {
  OneVar c;
  std::mt19937 rng(11);
  const char names[] = {'x', 'd', '1', 'm'};
  ShiftOp ops[] = {c.x(c.poly), c.d(c.poly), c.d1(c.poly), c.dm1(c.poly)};
  for (int trial = 0; trial < 20; ++trial) {
    QPolynomial p = random_poly(rng, c, c.poly);
    for (int g = 0; g < 4; ++g) CHECK(act(ops[g], p) == act_by_formula(names[g], p, c));
  }
}

TEST_CASE("faithfulness and associativity") {
  OneVar c;
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    ShiftOp a = random_op(rng, c, c.poly), b = random_op(rng, c, c.poly), e = random_op(rng, c, c.poly);
    QPolynomial p = random_poly(rng, c, c.poly);
    CHECK(act(a * b, p) == act(a, act(b, p)));
    CHECK((a * b) * e == a * (b * e));
    CHECK_FALSE(domain_guard(a * b));
  }
}

TEST_CASE("equality matches a box probe") {
  OneVar c;
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    ShiftOp a = random_op(rng, c, c.laur), b = random_op(rng, c, c.laur);
    if (trial % 3 == 0) b = a;
    bool box = true;
    for (int32_t e = -3; e < 3; ++e)
      box = box && act(a, c.mono(e, c.laur)) == act(b, c.mono(e, c.laur));
    CHECK(box == (a == b));
  }
}

TEST_CASE("commutators") {
  OneVar c;
  auto id = ShiftOp::identity(c.f, c.poly);
  CHECK(commutator(c.d(c.poly), c.x(c.poly)) == id);
  CHECK(commutator(c.s(1, c.poly), c.s(-1, c.poly)).is_zero());
  // [d1, x]_1 = d1 x - (sigma_1 x sigma_1^{-1}) d1 = d1 x - q x d1 = 1
  CHECK(commutator(c.d1(c.poly), c.x(c.poly), c.s(1, c.poly)) == id);
  CHECK_THROWS_AS(commutator(c.d(c.poly), c.x(c.poly), c.d(c.poly)), PreconditionViolated);
}

TEST_CASE("inverse and powers") {
  OneVar c;
  auto id = ShiftOp::identity(c.f, c.laur);
  ShiftOp w = c.op(-1, "q^[m]", c.laur);
  auto wi = w.inverse();
  REQUIRE(wi);
  CHECK(w * *wi == id);
  CHECK(*wi * w == id);
  CHECK(w.pow(-2) * w.pow(2) == id);
  CHECK_FALSE(c.x(c.poly).inverse());
  CHECK_FALSE(c.d(c.laur).inverse());
  CHECK_THROWS_AS(c.x(c.poly).pow(-1), NegativePowerOfNonInvertible);
  CHECK(c.s(1, c.poly).pow(-1) == c.s(-1, c.poly));
}

TEST_CASE("clearing negative shifts") {
  OneVar c;
  ShiftOp lx = c.x(c.laur);
  Cleared a = clear_negative_shifts(c.op(-1, "1", c.laur), {0}, {lx});
  CHECK(a.t == IVec{1});
  CHECK(a.composite == ShiftOp::identity(c.f, c.laur));

  Cleared b = clear_negative_shifts(c.d1(c.laur), {0}, {lx});
  CHECK(b.t == IVec{0});

  ShiftOp w1 = c.op(-1, "q^[m]", c.laur);
  Cleared w = clear_negative_shifts(w1, {0}, {lx});
  CHECK(w.t == IVec{1});
  CHECK(w.composite == c.s(1, c.laur));
  CHECK(domain_guard(w1, c.poly));

  CHECK_THROWS_AS(clear_negative_shifts(c.d1(c.poly), {0}, {c.x(c.poly)}), PreconditionViolated);
}

TEST_CASE("JSON round trip") {
  OneVar c;
  std::mt19937 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    ShiftOp a = random_op(rng, c, c.laur);
    std::string js = to_json(a);
    ShiftOp b = shiftop_from_json(js, c.f);
    CHECK(a == b);
    CHECK(to_json(b) == js);
    ShiftOp fresh = shiftop_from_json(js);
    CHECK(to_json(fresh) == js);
  }
  CHECK(to_json(c.d(c.poly)) ==
        R"({"module":{"v":1,"laurent":[false],"params":["q"]},"terms":[{"shift":[-1],"coeff":"m"}]})");
  CHECK_THROWS_AS(shiftop_from_json("{\"module\":", c.f), SyntaxError);
  CHECK_THROWS_AS(shiftop_from_json("{\"terms\":[]}", c.f), SyntaxError);
}
