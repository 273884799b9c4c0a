#include <doctest.h>

#include <random>
#include <set>

#include "qdop/error.hpp"
#include "qdop/rewrite.hpp"

using namespace qdop;

namespace {

const AlgebraPreset& dpoly() {
  static const AlgebraPreset p = build_preset(PresetId::D_poly_1);
  return p;
}

const AlgebraPreset& dlaurent() {
  static const AlgebraPreset p = build_preset(PresetId::D_laurent_1);
  return p;
}

ShiftOp ev(const char* s, const AlgebraPreset& p = dpoly()) { return evaluate(parse_expression(s, p), p); }

Scalar sc(const char* s, const AlgebraPreset& p = dpoly()) { return parse_scalar(s, *p.params); }

std::map<std::string, Scalar> as_map(const Coordinates& c) {
  std::map<std::string, Scalar> m;
  for (const auto& t : c) m[t.element.descriptor()] = t.coeff;
  return m;
}

Expression random_expression(std::mt19937& rng, const std::vector<std::string>& letters, const AlgebraPreset& p,
                             std::size_t max_len) {
  Scalar q = p.params->param(0);
  const Scalar coeffs[] = {Scalar(1), Scalar(-1), Scalar(2), q, q.inverse(), q + Scalar(1)};
  std::vector<Expression> terms;
  std::size_t budget = 1 + rng() % max_len;
  while (budget > 0) {
    std::size_t len = 1 + rng() % budget;
    budget -= len;
    std::vector<Expression> f{Expression::scalar(coeffs[rng() % 6])};
    for (std::size_t i = 0; i < len; ++i) f.push_back(Expression::generator(letters[rng() % letters.size()]));
    terms.push_back(Expression::product(std::move(f)));
  }
  return Expression::sum(std::move(terms));
}

}  // namespace

TEST_CASE("parse and evaluate") {
  const auto& p = dpoly();
  auto id = ShiftOp::identity(p.params, p.module);
  Expression e = parse_expression("d1*x - q*x*d1", p);
  CHECK(e.kind == Expression::Kind::Sum);
  CHECK(e.children.size() == 2);
  CHECK(evaluate(e, p) == id);
  CHECK(ev("(q-1)*x*d1 + 1") == p.generator("s1"));
  CHECK(ev("s1*sm1") == id);
  CHECK(ev("dm1*d*d1 - q^2*d1*d*dm1").is_zero());
  CHECK(ev("sg[2]") == p.generator("s1").pow(2));
  CHECK(ev("s1^-1") == p.generator("sm1"));
  CHECK(ev("x*d1/(q - 1) - 1/(q-1)*x*d1").is_zero());
  CHECK_THROWS_AS(parse_expression("x^-1", p), NegativePowerOfNonInvertible);
  CHECK(ev("x^-1", dlaurent()) == dlaurent().generator("xinv"));
  CHECK_THROWS_AS(parse_expression("foo*x", p), UndefinedGenerator);
  CHECK_THROWS_AS(parse_expression("sg[1,0]", p), UndefinedGenerator);
  CHECK_THROWS_AS(parse_expression("x/d", p), SyntaxError);
  try {
    parse_expression("d1 *\n  * x", p);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& err) {
    CHECK(err.line() == 2);
    CHECK(err.column() == 3);
  }
  CHECK(parse_expression("2*(x + d)^3", p).length() == 6);
}

TEST_CASE("render round trip on a golden corpus") {
  const char* corpus[] = {"d1*x - q*x*d1",        "(q-1)*x*d1 + 1",       "dm1*d*d1 - q^2*d1*d*dm1",
                          "-x*d + 2",             "(x + d)^3*s1",         "1/(q - 1)*d1 - 1/(q-1)*dm1",
                          "q^-2*x*dm1 + q^-1 + 1", "-(d1 - q*dm1)*(x - 1)", "sg[3]*sm1^2",
                          "(1 + q + q^2)*x^2"};
  for (const char* s : corpus) {
    CAPTURE(s);
    Expression e = parse_expression(s, dpoly());
    std::string r = render(e, *dpoly().params);
    CAPTURE(r);
    CHECK(parse_expression(r, dpoly()) == e);
  }
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    Expression built = random_expression(rng, {"x", "d", "d1", "dm1", "s1"}, dpoly(), 6);
    Expression e = parse_expression(render(built, *dpoly().params), dpoly());
    CHECK(evaluate(e, dpoly()) == evaluate(built, dpoly()));
    CHECK(parse_expression(render(e, *dpoly().params), dpoly()) == e);
  }
}

TEST_CASE("action on polynomials") {
  const auto& p = dpoly();
  auto apply = [&](const char* op, const char* poly) {
    return render(act(ev(op), parse_polynomial(poly, p)), p.var_names);
  };
  CHECK(act(ev("d1"), parse_polynomial("x^3", p)) == p.monomial(IVec{2}, sc("1+q+q^2")));
  CHECK(apply("s1", "x^5") == "q^5*x^5");
  CHECK(apply("d", "1") == "0");
  CHECK(apply("d", "x^2 + 3*x") == "2*x + 3");
  CHECK_THROWS_AS(parse_polynomial("d1", p), UndefinedGenerator);
  auto t = build_preset(PresetId::Torus_A3);
  CHECK(act(evaluate(parse_expression("sx", t), t), parse_polynomial("x^2*y", t)) ==
        t.monomial(IVec{2, 1}, t.params->param(0).pow(2)));
  CHECK(parse_polynomial("y*x", t) == t.monomial(IVec{1, 1}, t.params->param(0).inverse()));
}

TEST_CASE("basis enumeration counts") {
  CHECK(enumerate_basis(BasisId::G_basis, {.degree = 2}).size() == 7);
  auto g0 = enumerate_basis(BasisId::G_basis, {.degree = 0});
  REQUIRE(g0.size() == 1);
  CHECK(g0[0].descriptor() == "1");
  CHECK(special_monomials("d1", "d", 3).size() == 7);
  for (int64_t n = 0; n <= 8; ++n) {
    CHECK(special_monomials("d1", "d", n).size() == std::size_t((n * n + n + 2) / 2));
    auto g = enumerate_basis(BasisId::G_basis, {.degree = n});
    CHECK(g.size() == std::size_t(n * n + n + 1));
    std::set<std::string> seen;
    for (const auto& b : enumerate_basis(BasisId::D_basis, {.degree = n})) seen.insert(b.descriptor());
    CHECK(seen.size() == enumerate_basis(BasisId::D_basis, {.degree = n}).size());
  }
  CHECK(enumerate_basis(BasisId::PBW_weyl, {.max_degree = 2}, 2).size() == 15);
  CHECK(enumerate_basis(BasisId::SkewGroup_basis, {.max_degree = 2}, 3).size() == 28 * 27);
  for (const auto& b : enumerate_basis(BasisId::D_basis, {.max_degree = 4, .shift = IVec{-1}}))
    CHECK(evaluate(b, dpoly()).coeff_at(IVec{-1}));
}

TEST_CASE("worked coordinate examples") {
  const auto& p = dpoly();
  Scalar q = p.params->param(0);
  auto c1 = coordinates_in_basis(ev("x*d1*dm1"), BasisId::D_basis, p);
  REQUIRE(c1);
  CHECK(as_map(*c1) == std::map<std::string, Scalar>{{"d1", (q - Scalar(1)).inverse()}, {"dm1", -(q - Scalar(1)).inverse()}});
  CHECK(render(*c1, *p.params) == "(1/(q - 1))*d1 + (-1/(q - 1))*dm1");

  auto c2 = coordinates_in_basis(ev("d*dm1"), BasisId::D_basis, p);
  REQUIRE(c2);
  CHECK(as_map(*c2) == std::map<std::string, Scalar>{
                           {"d*d1", Scalar(1)}, {"d1*d", -q}, {"d1*dm1", q - Scalar(1)}, {"dm1*d", q.inverse()}});
  CHECK(render(*c2, *p.params) == "d*d1 - q*d1*d + (q - 1)*d1*dm1 + (1/q)*dm1*d");

  auto c3 = coordinates_in_basis(p.generator("s1"), BasisId::D_basis, p);
  REQUIRE(c3);
  CHECK(as_map(*c3) == std::map<std::string, Scalar>{{"1", Scalar(1)}, {"x*d1", q - Scalar(1)}});

  auto one = coordinates_in_basis(ShiftOp::identity(p.params, p.module), BasisId::D_basis, p);
  REQUIRE(one);
  CHECK(render(*one, *p.params) == "1");
  CHECK_FALSE(coordinates_in_basis(dlaurent().generator("xinv"), BasisId::D_basis, dlaurent()));
  CHECK_FALSE(coordinates_in_basis(p.generator("x"), BasisId::G_basis, p));
}

TEST_CASE("basis elements have unit coordinates") {
  for (BasisId b : {BasisId::D_basis, BasisId::G_basis, BasisId::W_basis})
    for (const auto& e : enumerate_basis(b, {.max_degree = 4})) {
      CAPTURE(e.descriptor());
      auto c = coordinates_in_basis(evaluate(e, dpoly()), b, dpoly());
      REQUIRE(c);
      REQUIRE(c->size() == 1);
      CHECK((*c)[0].element == e);
      CHECK((*c)[0].coeff == Scalar(1));
    }
}

TEST_CASE("normal forms re-expand exactly") {
  std::mt19937 rng(42);
  const auto& p = dpoly();
  for (int i = 0; i < 200; ++i) {
    Expression e = random_expression(rng, {"x", "d", "d1", "dm1"}, p, 6);
    ShiftOp op = evaluate(e, p);
    auto c = coordinates_in_basis(op, BasisId::D_basis, p);
    CAPTURE(render(e, *p.params));
    REQUIRE(c);
    CHECK(expand(*c, p) == op);
    if (i % 10 == 0) {
      auto shuffled = coordinates_in_basis(op, BasisId::D_basis, p, {.shuffle_seed = uint64_t(i) + 1});
      REQUIRE(shuffled);
      CHECK(as_map(*shuffled) == as_map(*c));
      auto lc = coordinates_in_basis(evaluate(e, dlaurent()), BasisId::D_basis, dlaurent());
      REQUIRE(lc);
      CHECK(as_map(*lc) == as_map(*c));
    }
  }
}

TEST_CASE("left ideal membership and claim cofactors") {
  const auto& p = dpoly();
  Scalar q = p.params->param(0);
  auto c = membership_in_left_ideal_x(p.generator("x"), p);
  REQUIRE(c);
  CHECK(render(*c, *p.params) == "1");
  auto c1 = membership_in_left_ideal_x(ev("d - q*d1"), p);
  REQUIRE(c1);
  CHECK(as_map(*c1) == std::map<std::string, Scalar>{{"d*d1", Scalar(1)}, {"d1*d", -q}});
  CHECK_FALSE(membership_in_left_ideal_x(ShiftOp::identity(p.params, p.module), p));
  CHECK_FALSE(membership_in_left_ideal_x(p.generator("d"), p));

  CHECK(as_map(claim_cofactor(1, p)) == as_map(*c1));
  ShiftOp psi2 = expand(claim_cofactor(2, p), p);
  CHECK(psi2 * p.generator("x") == ev("(1+q)*d^2 - 2*q^2*d1*d"));
  for (int64_t j = 3; j <= 6; ++j) {
    ShiftOp psi = expand(claim_cofactor(j, p), p);
    ShiftOp rhs = p.generator("d").pow(j).scaled(q_number(j, q)) -
                  (p.generator("d1") * p.generator("d").pow(j - 1)).scaled(Scalar(long(j)) * q.pow(j));
    CHECK(psi * p.generator("x") == rhs);
  }
  CHECK_THROWS_AS(claim_cofactor(0, p), PreconditionViolated);
}

TEST_CASE("Ore witnesses") {
  const auto& p = dpoly();
  Scalar q = p.params->param(0);
  auto w = ore_witness(p.generator("d"), 1, 4, p);
  CHECK(w.k == 2);
  CHECK(as_map(w.cofactor) == std::map<std::string, Scalar>{{"1", Scalar(2)}, {"x*d", Scalar(1)}});
  auto w1 = ore_witness(p.generator("d1"), 1, 4, p);
  CHECK(w1.k == 2);
  CHECK(as_map(w1.cofactor) == std::map<std::string, Scalar>{{"1", q + Scalar(1)}, {"x*d1", q * q}});
  auto wm = ore_witness(p.generator("dm1"), 1, 4, p);
  CHECK(wm.k == 2);
  CHECK(as_map(wm.cofactor) ==
        std::map<std::string, Scalar>{{"1", q.inverse() + Scalar(1)}, {"x*dm1", q.pow(-2)}});
  auto wx = ore_witness(p.generator("x"), 1, 4, p);
  CHECK(wx.k == 0);
  CHECK(render(wx.cofactor, *p.params) == "1");
  CHECK_THROWS_AS(ore_witness(p.generator("d"), 1, 1, p), NoWitnessWithinBound);
  // Direct identity: d x^2 = x (x d + 2).
  CHECK(p.generator("d") * p.generator("x").pow(2) == p.generator("x") * ev("x*d + 2"));
}

TEST_CASE("graded dimensions and Hilbert coefficients") {
  const auto& p = dpoly();
  std::vector<std::string> g = {"d", "d1", "dm1"};
  auto h = hilbert_coefficients(6);
  CHECK(h == std::vector<std::size_t>{1, 3, 7, 13, 21, 31, 43});
  CHECK(hilbert_coefficients(0) == std::vector<std::size_t>{1});
  CHECK(hilbert_coefficients(3) == std::vector<std::size_t>{1, 3, 7, 13});
  for (std::size_t n = 0; n <= 4; ++n) {
    auto r = graded_dimension(p, g, n);
    CHECK(r.method == DimMethod::Exact);
    CHECK(r.dimension == n * n + n + 1);
    CHECK(r.dimension == h[n]);
    CHECK(graded_dimension(p, g, n, DimMethod::DualPrime).dimension == r.dimension);
  }
  auto r5 = graded_dimension(p, g, 5);
  CHECK(r5.method == DimMethod::DualPrime);
  CHECK(r5.dimension == 31);
  CHECK(graded_dimension(p, {"d", "d1"}, 3).dimension == 7);
  std::vector<ShiftOp> sp;
  for (const auto& b : special_monomials("d1", "d", 3)) sp.push_back(evaluate(b, p));
  CHECK(span_dimension(sp) == 7);
}

TEST_CASE("PBW and skew-group bases") {
  std::mt19937 rng(17);
  for (std::size_t n : {2, 3}) {
    PresetOptions o;
    o.n = n;
    auto w = build_preset(PresetId::WeylLambda_n, o);
    std::vector<std::string> letters;
    for (std::size_t i = 1; i <= n; ++i) {
      letters.push_back("u" + std::to_string(i));
      letters.push_back("v" + std::to_string(i));
    }
    for (int i = 0; i < 30; ++i) {
      Expression e = random_expression(rng, letters, w, 5);
      ShiftOp op = evaluate(e, w);
      auto c = coordinates_in_basis(op, BasisId::PBW_weyl, w);
      REQUIRE(c);
      CHECK(expand(*c, w) == op);
    }
    std::vector<ShiftOp> mono;
    for (const auto& b : enumerate_basis(BasisId::PBW_weyl, {.max_degree = n == 2 ? 5 : 3}, n))
      mono.push_back(evaluate(b, w));
    CHECK(span_dimension(mono) == mono.size());
  }
  PresetOptions o;
  o.n = 3;
  auto s = build_preset(PresetId::SkewGroup_n, o);
  auto elems = enumerate_basis(BasisId::SkewGroup_basis, {.max_degree = 1}, 3);
  std::vector<ShiftOp> ops;
  for (const auto& b : elems) ops.push_back(evaluate(b, s));
  CHECK(span_dimension(ops) == ops.size());
  for (int i = 0; i < 20; ++i) {
    Expression e = random_expression(rng, {"r1", "r2", "r3", "del1", "del2", "del3", "s1", "sm2", "x3", "d1"}, s, 4);
    ShiftOp op = evaluate(e, s);
    auto c = coordinates_in_basis(op, BasisId::SkewGroup_basis, s);
    REQUIRE(c);
    CHECK(expand(*c, s) == op);
  }
  auto sg = coordinates_in_basis(s.generator("x2"), BasisId::SkewGroup_basis, s);
  REQUIRE(sg);
  CHECK(render(*sg, *s.params) == "r2*sg[0,1,0]");
}
