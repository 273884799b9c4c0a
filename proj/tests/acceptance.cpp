// One line per acceptance criterion; exit status 0 iff every criterion passes.
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "qdop/error.hpp"
#include "qdop/expression.hpp"
#include "qdop/rewrite.hpp"
#include "qdop/verify.hpp"

using namespace qdop;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void require(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ShiftOp ev(const AlgebraPreset& p, const std::string& s) { return evaluate(parse_expression(s, p), p); }

Scalar sc(const AlgebraPreset& p, const std::string& s) { return parse_scalar(s, *p.params); }

// Sum of up to three products of random letters with small coefficients.
ShiftOp random_word_sum(std::mt19937& rng, const std::vector<std::string>& letters, const AlgebraPreset& p,
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
  return evaluate(Expression::sum(std::move(terms)), p);
}

AlgebraPreset preset(PresetId id, std::size_t n = 0) {
  PresetOptions o;
  if (n) o.n = n;
  return build_preset(id, o);
}

// Coordinates equal term by term to the displayed (descriptor, coefficient) list.
void match_display(Outcome& o, const std::string& label, const Coordinates& got,
                   const std::vector<std::pair<std::string, std::string>>& want, const AlgebraPreset& p) {
  std::map<std::string, Scalar> g, w;
  for (const auto& t : got) g[t.element.descriptor()] = t.coeff;
  for (const auto& [d, c] : want) w[d] = sc(p, c);
  o.require(g == w, label + " gave " + render(got, *p.params));
}

Outcome relation_suite() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t ran = 0;
  for (int k = 1; k <= 32; ++k) {
    Report r = run_check("R" + std::to_string(k));
    ++ran;
    o.require(r.passed(), r.id + ": " + r.witness);
  }
  o.require(ran == 32, "expected 32 checks, ran " + std::to_string(ran));
  double s = seconds_since(t0);
  o.require(s < 60, "took " + std::to_string(s) + " s");
  if (o.ok) o.detail = "R1-R32 pass";
  return o;
}

Outcome dimension_theorem() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  AlgebraPreset p = preset(PresetId::D_poly_1);
  std::ostringstream dims;
  for (std::size_t n = 1; n <= 6; ++n) {
    DimResult r = graded_dimension(p, {"d", "d1", "dm1"}, n);
    DimMethod want = n <= 4 ? DimMethod::Exact : DimMethod::DualPrime;
    o.require(r.method == want, "unexpected method at n = " + std::to_string(n));
    o.require(r.dimension == n * n + n + 1,
              "dim at n = " + std::to_string(n) + " is " + std::to_string(r.dimension));
    dims << (n > 1 ? "," : "") << r.dimension;
  }
  for (int64_t n = 1; n <= 8; ++n)
    o.require(special_monomials("d1", "d", n).size() == static_cast<std::size_t>((n * n + n + 2) / 2),
              "special monomial count at n = " + std::to_string(n));
  o.require(hilbert_coefficients(6) == std::vector<std::size_t>{1, 3, 7, 13, 21, 31, 43}, "hilbert coefficients");
  double s = seconds_since(t0);
  o.require(s < 300, "took " + std::to_string(s) + " s");
  if (o.ok) o.detail = "dims " + dims.str();
  return o;
}

Outcome normal_forms() {
  Outcome o;
  AlgebraPreset p = preset(PresetId::D_poly_1);
  std::mt19937 rng(20240601);
  for (int i = 0; i < 200 && o.ok; ++i) {
    ShiftOp op = random_word_sum(rng, {"x", "d", "d1", "dm1"}, p, 6);
    auto c = coordinates_in_basis(op, BasisId::D_basis, p);
    if (!c) {
      o.fail("sample " + std::to_string(i) + " has no coordinates");
      break;
    }
    o.require(expand(*c, p) == op, "sample " + std::to_string(i) + " does not re-expand");
  }
  auto nf = [&](const std::string& e) { return coordinates_in_basis(ev(p, e), BasisId::D_basis, p).value(); };
  match_display(o, "x*d1*dm1", nf("x*d1*dm1"), {{"d1", "1/(q - 1)"}, {"dm1", "-1/(q - 1)"}}, p);
  match_display(o, "d*dm1", nf("d*dm1"), {{"d*d1", "1"}, {"d1*d", "-q"}, {"d1*dm1", "q - 1"}, {"dm1*d", "q^-1"}}, p);
  match_display(o, "s1", nf("s1"), {{"1", "1"}, {"x*d1", "q - 1"}}, p);
  if (o.ok) o.detail = "200 samples and 3 displays";
  return o;
}

Outcome pbw() {
  Outcome o;
  std::mt19937 rng(7);
  for (std::size_t n : {2, 3}) {
    AlgebraPreset w = preset(PresetId::WeylLambda_n, n);
    std::vector<std::string> letters;
    for (std::size_t i = 1; i <= n; ++i) {
      letters.push_back("u" + std::to_string(i));
      letters.push_back("v" + std::to_string(i));
    }
    for (int i = 0; i < 100 && o.ok; ++i) {
      ShiftOp op = random_word_sum(rng, letters, w, 5);
      auto c = coordinates_in_basis(op, BasisId::PBW_weyl, w);
      if (!c) {
        o.fail("n = " + std::to_string(n) + " sample " + std::to_string(i) + " has no coordinates");
        break;
      }
      o.require(expand(*c, w) == op, "n = " + std::to_string(n) + " sample " + std::to_string(i));
    }
    std::vector<ShiftOp> mono;
    for (const auto& b : enumerate_basis(BasisId::PBW_weyl, {.max_degree = 5}, n)) mono.push_back(evaluate(b, w));
    o.require(span_dimension(mono) == mono.size(), "PBW monomials dependent for n = " + std::to_string(n));
  }
  AlgebraPreset s = preset(PresetId::SkewGroup_n, 3);
  std::vector<ShiftOp> ops;
  for (const auto& b : enumerate_basis(BasisId::SkewGroup_basis, {.max_degree = 2, .gamma_bound = 1}, 3))
    ops.push_back(evaluate(b, s));
  o.require(ops.size() == 28 * 27, "skew-group family has " + std::to_string(ops.size()) + " elements");
  o.require(span_dimension(ops) == ops.size(), "skew-group basis elements dependent");
  if (o.ok) o.detail = "200 samples, PBW and skew-group families independent";
  return o;
}

Outcome claim_cofactors() {
  Outcome o;
  AlgebraPreset p = preset(PresetId::D_poly_1);
  ShiftOp x = p.generator("x");
  for (int64_t j = 1; j <= 6; ++j) {
    Coordinates psi = claim_cofactor(j, p);
    std::string lhs = "(q^" + std::to_string(j) + " - 1)/(q - 1)*d^" + std::to_string(j) + " - " + std::to_string(j) +
                      "*q^" + std::to_string(j) + "*d1" + (j > 1 ? "*d^" + std::to_string(j - 1) : "");
    o.require(expand(psi, p) * x == ev(p, lhs), "j = " + std::to_string(j) + " does not recompose");
  }
  Coordinates psi1 = claim_cofactor(1, p);
  o.require(expand(psi1, p) == ev(p, "d*d1 - q*d1*d"), "psi_1 = " + render(psi1, *p.params));
  o.require(ev(p, "d - q*d1") == ev(p, "(d*d1 - q*d1*d)*x"), "d - q d1 = (d d1 - q d1 d) x");
  if (o.ok) o.detail = "j = 1..6";
  return o;
}

Outcome ore_witnesses() {
  Outcome o;
  AlgebraPreset p = preset(PresetId::D_poly_1);
  const std::pair<const char*, const char*> cases[] = {
      {"d", "x*d + 2"}, {"d1", "q^2*x*d1 + q + 1"}, {"dm1", "q^-2*x*dm1 + q^-1 + 1"}};
  for (const auto& [g, cof] : cases) {
    o.require(ev(p, std::string(g) + "*x^2") == ev(p, std::string("x*(") + cof + ")"), std::string(g) + " x^2");
    OreWitness w = ore_witness(p.generator(g), 1, 4, p);
    o.require(w.k == 2, std::string(g) + ": k = " + std::to_string(w.k));
    o.require(expand(w.cofactor, p) == ev(p, cof), std::string(g) + ": cofactor " + render(w.cofactor, *p.params));
  }
  if (o.ok) o.detail = "k = 2 for d, d1, dm1";
  return o;
}

Outcome anti_isomorphisms() {
  Outcome o;
  for (PresetId id : {PresetId::D_poly_1, PresetId::D_laurent_1}) {
    AlgebraPreset p = preset(id);
    Report r = check_antihom(one_variable_opposite_map(p), p);
    o.require(r.passed(), std::string(preset_name(id)) + ": " + r.witness);
    Report idr = check_antihom(identity_map(p), p);
    o.require(!idr.passed() && !idr.witness.empty(), std::string(preset_name(id)) + ": identity map passed");
  }
  AlgebraPreset s = preset(PresetId::SkewGroup_n, 3);
  Report r = check_antihom(torus_opposite_map(s), s);
  o.require(r.passed(), "SkewGroup_n: " + r.witness);
  Report idr = check_antihom(identity_map(s), s);
  o.require(!idr.passed(), "SkewGroup_n: identity map passed");
  if (o.ok) o.detail = "identity map fails with '" + idr.witness.substr(0, 60) + "'";
  return o;
}

Outcome plane_and_tori() {
  Outcome o;
  Report r30 = run_check("R30");
  o.require(r30.passed(), "R30: " + r30.witness);
  AlgebraPreset p = preset(PresetId::QuantumPlane);
  const std::vector<std::string> dx = {"x", "dxm1", "dx", "dx1"};
  const std::vector<std::string> dy = {"ry", "dym1", "dy", "dy1"};
  std::size_t pairs = 0;
  for (const auto& a : dx)
    for (const auto& b : dy) {
      ShiftOp ga = p.generator(a), gb = p.generator(b);
      o.require(ga * gb == gb * ga, a + " and " + b + " do not commute");
      ++pairs;
    }
  if (o.ok) o.detail = "6 identities, " + std::to_string(pairs) + " commuting pairs";
  return o;
}

Outcome exterior() {
  Outcome o;
  for (std::size_t n = 1; n <= 3; ++n) {
    auto t0 = std::chrono::steady_clock::now();
    MatrixUnitResult r = exterior_matrix_units(n);
    double s = seconds_since(t0);
    o.require(r.report.passed(), "n = " + std::to_string(n) + ": " + r.report.witness);
    o.require(r.span_dimension == (std::size_t(1) << (2 * n)), "span for n = " + std::to_string(n));
    if (n == 3) o.require(s < 30, "n = 3 took " + std::to_string(s) + " s");
  }
  if (o.ok) o.detail = "spans 4, 16, 64";
  return o;
}

Outcome localization() {
  Outcome o;
  PresetOptions opts;
  opts.n = 3;
  opts.laurent_count = 1;
  AlgebraPreset p = build_preset(PresetId::D_poly_n, opts);
  ModuleSpec guarded = ModuleSpec::polynomial(3);
  ShiftOp lx = p.generator("x1");
  std::mt19937 rng(1303);
  const std::vector<std::string> letters = {"x1", "d1", "dq1", "dqm1", "x2", "d2", "dq2", "x3", "d3", "dqm3", "s1", "sm2"};
  std::size_t nontrivial = 0;
  for (int i = 0; i < 20 && o.ok; ++i) {
    ShiftOp op = random_word_sum(rng, letters, p, 4);
    int64_t neg = static_cast<int64_t>(rng() % 4);
    for (int64_t k = 0; k < neg; ++k) op = p.generator("xinv1") * op;
    if (rng() % 2) op = op * p.generator("xinv1");
    Cleared c = clear_negative_shifts(op, {0}, {lx});
    std::string at = "operator " + std::to_string(i);
    if (c.t.size() != 1 || c.t[0] < 0) {
      o.fail(at + ": malformed t");
      break;
    }
    ShiftOp lam = ShiftOp::identity(p.params, p.module);
    for (int32_t k = 0; k < c.t[0]; ++k) {
      o.require(domain_guard(lam * op, guarded).has_value(), at + ": guard passes at t = " + std::to_string(k));
      lam = lx * lam;
    }
    o.require(c.composite == lam * op, at + ": composite differs from x1^t * op");
    o.require(!domain_guard(c.composite, guarded), at + ": cleared operator fails the guard");
    nontrivial += c.t[0] > 0;
  }
  o.require(nontrivial > 0, "every t was trivial");
  if (o.ok) o.detail = "20 operators, " + std::to_string(nontrivial) + " with t > 0";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"relation suite", relation_suite},
      {"dimension theorem", dimension_theorem},
      {"normal forms", normal_forms},
      {"PBW", pbw},
      {"claim cofactors", claim_cofactors},
      {"Ore witnesses", ore_witnesses},
      {"anti-isomorphisms", anti_isomorphisms},
      {"quantum plane and tori", plane_and_tori},
      {"exterior matrix units", exterior},
      {"localization", localization},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.ok;
    std::cout << "criterion " << std::setw(2) << k << " " << (o.ok ? "PASS" : "FAIL") << "  " << name << ": "
              << o.detail << " (" << std::fixed << std::setprecision(2) << seconds_since(t0) << " s)" << std::endl;
  }
  return failed ? 1 : 0;
}
