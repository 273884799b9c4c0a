#include <doctest.h>

#include <random>

#include "qdop/error.hpp"
#include "qdop/exppoly.hpp"

using namespace qdop;

namespace {

ParamFieldPtr field(std::vector<std::string> names) { return std::make_shared<const ParamField>(names); }

// Random ExpPoly in two variables built from a small menu of atoms.
ExpPoly random_exppoly(std::mt19937& rng, const ParamFieldPtr& f) {
  const char* atoms[] = {"q^[m1]", "m2", "r^[m1 - 2*m2]", "(q - 1)", "q^[-m2]*m1", "1/(q + r)", "m1^2"};
  ExpPoly e(f, 2);
  int terms = 1 + rng() % 3;
  for (int i = 0; i < terms; ++i) {
    ExpPoly t = ExpPoly::constant(f, 2, Scalar(1));
    int factors = 1 + rng() % 2;
    for (int j = 0; j < factors; ++j) t = t * parse_exppoly(atoms[rng() % 7], f, 2);
    e += t;
  }
  return e;
}

}  // namespace

TEST_CASE("q-number as an exponential polynomial") {
  auto f = field({"q"});
  ExpPoly e = parse_exppoly("(1/(q-1))*q^[m] + (-1/(q-1))", f, 1);
  CHECK(e.terms().size() == 2);
  for (int64_t m = 0; m < 6; ++m) {
    int64_t pt[] = {m};
    CHECK(e.eval(pt) == q_number(m, f->param(0)));
  }
  CHECK(parse_exppoly(render(e), f, 1) == e);
  CHECK(render(e) == "(-1/(q - 1)) + (1/(q - 1))*q^[m]");
}

TEST_CASE("ring operations agree with pointwise evaluation") {
  auto f = field({"q", "r"});
  std::mt19937 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    ExpPoly a = random_exppoly(rng, f), b = random_exppoly(rng, f);
    int32_t d[] = {static_cast<int32_t>(rng() % 5) - 2, static_cast<int32_t>(rng() % 5) - 2};
    ExpPoly prod = a * b, sum = a + b, sh = a.shifted(d), sub = a.substituted(1, 3);
    for (int64_t m1 = -1; m1 < 3; ++m1)
      for (int64_t m2 = 0; m2 < 3; ++m2) {
        int64_t m[] = {m1, m2};
        int64_t md[] = {m1 + d[0], m2 + d[1]};
        int64_t m3[] = {m1, 3};
        CHECK(prod.eval(m) == a.eval(m) * b.eval(m));
        CHECK(sum.eval(m) == a.eval(m) + b.eval(m));
        CHECK(sh.eval(m) == a.eval(md));
        CHECK(sub.eval(m) == a.eval(m3));
      }
    CHECK(parse_exppoly(render(a), f, 2) == a);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("zero test detects identities") {
  auto f = field({"q"});
  // [m+1] - q[m] - 1 == 0
  ExpPoly a = parse_exppoly("(q^[m+1] - 1)/(q - 1) - q*(q^[m] - 1)/(q - 1) - 1", f, 1);
  CHECK(a.is_zero());
  ExpPoly b = parse_exppoly("q^[m]*q^[m] - q^[2*m]", f, 1);
  CHECK(b.is_zero());
}

TEST_CASE("context mismatch is refused") {
  auto f = field({"q"}), g = field({"p"});
  ExpPoly a = parse_exppoly("q^[m]", f, 1), b = parse_exppoly("p^[m]", g, 1);
  CHECK_THROWS_AS(a + b, ContextMismatch);
  ExpPoly c = parse_exppoly("q^[m1]", f, 2);
  CHECK_THROWS_AS(a * c, ContextMismatch);
}

TEST_CASE("coordinates by elimination") {
  auto f = field({"q"});
  std::vector<ExpPoly> basis = {parse_exppoly("q^[m]", f, 1), parse_exppoly("m", f, 1),
                                parse_exppoly("1", f, 1)};
  auto c = coordinates(parse_exppoly("3*q^[m] - m/q + 2", f, 1), basis);
  REQUIRE(c.has_value());
  CHECK((*c)[0] == Scalar(3));
  CHECK((*c)[1] == -f->power(0, -1));
  CHECK((*c)[2] == Scalar(2));
  CHECK_FALSE(coordinates(parse_exppoly("q^[2*m]", f, 1), basis).has_value());
  // Dependent family still yields a valid combination.
  basis.push_back(parse_exppoly("q^[m] + m", f, 1));
  auto d = coordinates(parse_exppoly("q^[m] + 2*m", f, 1), basis);
  REQUIRE(d.has_value());
  ExpPoly back(f, 1);
  for (std::size_t i = 0; i < basis.size(); ++i) back += basis[i].scaled((*d)[i]);
  CHECK(back == parse_exppoly("q^[m] + 2*m", f, 1));
}

TEST_CASE("exppoly syntax errors") {
  auto f = field({"q"});
  CHECK_THROWS_AS(parse_exppoly("q^[k]", f, 1), SyntaxError);
  CHECK_THROWS_AS(parse_exppoly("m^[m]", f, 1), SyntaxError);
  CHECK_THROWS_AS(parse_exppoly("1/m", f, 1), SyntaxError);
}

TEST_CASE("exppoly arithmetic examples") {
  auto f = field({"q"});
  Scalar q = f->param(0);
  auto E = [&](const char* s) { return parse_exppoly(s, f, 1); };
  CHECK(E("q^[m]") * E("q^[-m]") == E("1"));
  CHECK(E("(q^[m] - 1)/(q - 1)") * E("q - 1") == E("q^[m] - 1"));
  ExpPoly a = E("(q^[m] - 1)/(q - 1)"), b = E("(q^[-m] - 1)/(1/q - 1)");
  ExpPoly ab = a * b;
  for (int64_t m = 0; m <= 10; ++m) {
    int64_t pt[] = {m};
    CHECK(ab.eval(pt) == q_number(m, q) * q_number(m, q.inverse()));
  }
  int32_t one[] = {1}, minus[] = {-1};
  CHECK(E("q^[m]").shifted(one) == E("q*q^[m]"));
  CHECK(E("m").shifted(minus) == E("m - 1"));
  ExpPoly sa = a.shifted(one);
  for (int64_t m = 0; m <= 8; ++m) {
    int64_t pt[] = {m};
    CHECK(sa.eval(pt) == Scalar(1) + q * q_number(m, q));
  }
  int64_t three[] = {3}, zero[] = {0};
  CHECK(a.eval(three) == parse_scalar("1 + q + q^2", *f));
  CHECK(E("q^[m]").eval(zero) == Scalar(1));
  auto f3 = field({"q_12", "q_13", "q_23"});
  int64_t pt3[] = {2, 0, 2};
  CHECK(parse_exppoly("m1*q_23^[m3]", f3, 3).eval(pt3) == f3->param(2).pow(2) * Scalar(2));
}

TEST_CASE("exppoly zero test examples") {
  auto f = field({"q"});
  auto E = [&](const char* s) { return parse_exppoly(s, f, 1); };
  CHECK((E("q^[m]") - E("q^[m]")).is_zero());
  CHECK((E("q^[m] - 1") - E("q - 1") * E("(q^[m] - 1)/(q - 1)")).is_zero());
  ExpPoly d = E("(q^[m] - 1)/(q - 1)") - E("m");
  CHECK_FALSE(d.is_zero());
  int64_t two[] = {2};
  CHECK_FALSE(d.eval(two).is_zero());
}

TEST_CASE("exppoly coordinates examples") {
  auto f = field({"q"});
  Scalar q = f->param(0);
  auto E = [&](const char* s) { return parse_exppoly(s, f, 1); };
  auto c = coordinates(E("(q^[m] - 1)/(q - 1)"), {E("q^[m]"), E("1")});
  REQUIRE(c);
  CHECK((*c)[0] == (q - Scalar(1)).inverse());
  CHECK((*c)[1] == -(q - Scalar(1)).inverse());
  CHECK_FALSE(coordinates(E("m^2"), {E("m"), E("1")}));
  // Coefficients on x^m of d*d1, d1*d and d*d: only the first has a bare q^[m] axis.
  ExpPoly dd1 = E("(m - 1)*(q^[m] - 1)/(q - 1)");
  ExpPoly d1d = E("m*(q^[m - 1] - 1)/(q - 1)");
  ExpPoly d2 = E("m*(m - 1)");
  bool bare = false;
  for (const auto& [axis, v] : flatten(dd1)) bare = bare || (!axis.chr.is_zero() && axis.mono.is_one());
  CHECK(bare);
  CHECK_FALSE(coordinates(dd1, {d1d, d2}));
}

TEST_CASE("shift is invertible and zero test matches sampling") {
  auto f = field({"q", "r"});
  std::mt19937 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    ExpPoly a = random_exppoly(rng, f);
    int32_t d[] = {static_cast<int32_t>(rng() % 7) - 3, static_cast<int32_t>(rng() % 7) - 3};
    int32_t nd[] = {-d[0], -d[1]};
    CHECK(a.shifted(d).shifted(nd) == a);
    ExpPoly z = trial % 2 ? a - a.shifted(d).shifted(nd) : a;
    bool all_zero = true;
    for (int k = 0; k < 50; ++k) {
      int64_t m[] = {int64_t(rng() % 11) - 5, int64_t(rng() % 11) - 5};
      all_zero = all_zero && z.eval(m).is_zero();
    }
    CHECK(z.is_zero() == all_zero);
  }
}
