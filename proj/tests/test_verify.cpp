#include <doctest.h>

#include "qdop/error.hpp"
#include "qdop/verify.hpp"

using namespace qdop;

TEST_CASE("every check in the catalog passes on generic parameters") {
  for (const auto& info : check_catalog()) {
    Report r = run_check(info.id);
    INFO(info.id << ": " << r.witness);
    CHECK(r.passed());
    CHECK(r.witness.empty());
    MESSAGE(info.id << " " << r.elapsed_ms << " ms");
  }
}

TEST_CASE("catalog ids are R1 to R36 in order") {
  const auto& c = check_catalog();
  REQUIRE(c.size() == 36);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i].id == "R" + std::to_string(i + 1));
    CHECK_FALSE(c[i].anchor.empty());
  }
}

TEST_CASE("unknown ids and degenerate pins are refused") {
  CHECK_THROWS_AS(run_check("R0"), UnknownCheckId);
  CHECK_THROWS_AS(run_check("R37"), UnknownCheckId);
  for (Rational v : {Rational(1), Rational(-1), Rational(0)}) {
    VerifyOptions o;
    o.pins["q"] = v;
    CHECK_THROWS_AS(run_check("R3", o), PreconditionViolated);
  }
  VerifyOptions unknown;
  unknown.pins["t"] = Rational(3);
  CHECK_THROWS_AS(run_check("R3", unknown), PreconditionViolated);
}

TEST_CASE("pinned parameters still pass") {
  VerifyOptions o;
  o.pins["q"] = Rational(3);
  o.pins["q_12"] = Rational(2);
  o.pins["q_13"] = Rational(5);
  o.pins["q_23"] = Rational(7);
  for (const char* id : {"R1", "R3", "R15", "R19", "R21", "R25", "R28", "R29", "R30", "R32"}) {
    Report r = run_check(id, o);
    INFO(id << ": " << r.witness);
    CHECK(r.passed());
  }
}

TEST_CASE("injected faults fail with a witness") {
  VerifyOptions o;
  o.faults = {"R3", "R33"};
  Report r = run_check("R3", o);
  CHECK_FALSE(r.passed());
  CHECK(r.witness.find("dm1*d1") != std::string::npos);
  Report d = run_check("R33", o);
  CHECK_FALSE(d.passed());
  CHECK_FALSE(d.witness.empty());
  CHECK(run_check("R2", o).passed());
}

TEST_CASE("run_suite filters by glob and keeps catalog order") {
  auto rs = run_suite("R1?");
  REQUIRE(rs.size() == 10);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(rs[i].id == "R1" + std::to_string(i));
    CHECK(rs[i].passed());
  }
  CHECK(run_suite("R3").size() == 1);
  CHECK(run_suite("nothing").empty());
  VerifyOptions o;
  o.faults = {"R2*"};
  for (const auto& r : run_suite("R2?", o)) CHECK_FALSE(r.passed());
}

TEST_CASE("check_antihom") {
  AlgebraPreset poly = build_preset(PresetId::D_poly_1);
  AlgebraPreset laurent = build_preset(PresetId::D_laurent_1);
  CHECK(check_antihom(one_variable_opposite_map(poly), poly).passed());
  CHECK(check_antihom(one_variable_opposite_map(laurent), laurent).passed());

  Report id = check_antihom(identity_map(poly), poly);
  CHECK_FALSE(id.passed());
  CHECK(id.witness.find("d_a x - q^a x d_a = 1") != std::string::npos);

  PresetOptions o;
  o.n = 3;
  AlgebraPreset skew = build_preset(PresetId::SkewGroup_n, o);
  CHECK(check_antihom(torus_opposite_map(skew), skew).passed());
  CHECK_FALSE(check_antihom(identity_map(skew), skew).passed());
  Report literal = check_antihom(torus_opposite_map_literal(skew), skew);
  CHECK_FALSE(literal.passed());
  CHECK(literal.witness.find("d1 d2 = q_ij d2 d1") != std::string::npos);
  o.laurent_count = 3;
  AlgebraPreset torus = build_preset(PresetId::SkewGroup_n, o);
  CHECK(check_antihom(torus_opposite_map(torus), torus).passed());

  // Dropping the sign on the image of d breaks d_a x - q^a x d_a = 1.
  AntiMap wrong = one_variable_opposite_map(poly);
  wrong["d"].coeff = Scalar(1);
  CHECK_FALSE(check_antihom(wrong, poly).passed());

  AntiMap partial = one_variable_opposite_map(poly);
  partial.erase("d1");
  CHECK_THROWS_AS(check_antihom(partial, poly), PreconditionViolated);
}

TEST_CASE("exterior matrix units") {
  for (std::size_t n = 1; n <= 3; ++n) {
    MatrixUnitResult r = exterior_matrix_units(n);
    INFO(r.report.witness);
    CHECK(r.report.passed());
    CHECK(r.span_dimension == (std::size_t(1) << (2 * n)));
  }
  std::map<std::string, Rational> pins = {{"p_12", Rational(2)}, {"p_13", Rational(3)}, {"p_23", Rational(5, 7)}};
  CHECK(exterior_matrix_units(3, pins).span_dimension == 64);
  CHECK_THROWS_AS(exterior_matrix_units(0), PreconditionViolated);
  CHECK_THROWS_AS(exterior_matrix_units(7), PreconditionViolated);
}
