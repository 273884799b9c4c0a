#include "qdop/verify.hpp"

#include <fnmatch.h>

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <set>
#include <thread>

#include "qdop/error.hpp"
#include "qdop/expression.hpp"
#include "qdop/rewrite.hpp"

namespace qdop {
namespace {

ShiftOp operator*(const Scalar& c, const ShiftOp& o) { return o.scaled(c); }

bool glob_match(const std::string& pattern, const std::string& s) {
  return fnmatch(pattern.c_str(), s.c_str(), 0) == 0;
}

std::string str(int64_t k) { return std::to_string(k); }

// q^(a)
std::string qpow(const std::string& q, int64_t a) { return q + "^(" + str(a) + ")"; }

// [n]_{q^a} as an expression.
std::string qnum(const std::string& q, int64_t n, int64_t a) {
  std::string s = "(0";
  for (int64_t k = 0; k < n; ++k) s += " + " + qpow(q, a * k);
  return s + ")";
}

IVec unit_vec(std::size_t n, std::size_t i, int32_t v = 1) {
  IVec e(n, 0);
  e[i] = v;
  return e;
}

ShiftOp zero_op(const AlgebraPreset& p) { return ShiftOp(p.params, p.module); }
ShiftOp one_op(const AlgebraPreset& p) { return ShiftOp::identity(p.params, p.module); }

ShiftOp eval(const AlgebraPreset& p, const std::string& src) { return evaluate(parse_expression(src, p), p); }

ShiftOp eval_words(const std::vector<Word>& words, const std::function<ShiftOp(const std::string&)>& letter,
                   const AlgebraPreset& p) {
  ShiftOp r = zero_op(p);
  for (const auto& w : words) {
    ShiftOp t = one_op(p);
    for (const auto& l : w.letters) t = t * letter(l);
    r += w.coeff * t;
  }
  return r;
}

// Nonzero image of a small monomial under diff, or its JSON form.
std::string describe(const ShiftOp& diff, const AlgebraPreset& p) {
  std::size_t v = p.module.v;
  IVec m(v, 0);
  auto lo = [&](std::size_t i) { return p.module.laurent[i] ? -2 : 0; };
  for (std::size_t i = 0; i < v; ++i) m[i] = lo(i);
  try {
    while (true) {
      QPolynomial r = act(diff, p.monomial(m));
      if (!r.is_zero())
        return "on " + render(p.monomial(m), p.var_names) + " the sides differ by " + render(r, p.var_names);
      std::size_t i = 0;
      while (i < v && m[i] == 4) {
        m[i] = lo(i);
        ++i;
      }
      if (i == v) break;
      ++m[i];
    }
  } catch (const Error&) {
  }
  return "residual " + to_json(diff);
}

ShiftOp sigma_of(const AlgebraPreset& p, const IVec& g) { return p.sigma({g.data(), g.size()}); }

Scalar beta(const AlgebraPreset& p, const IVec& a, const IVec& b) {
  return p.bichar.value({a.data(), a.size()}, {b.data(), b.size()}, *p.params);
}

class Ctx {
 public:
  Ctx(const VerifyOptions& o, bool fault) : opts(o), fault_(fault) {}

  const VerifyOptions& opts;

  AlgebraPreset preset(PresetId id, PresetOptions po = {}) const {
    std::size_t n = po.n.value_or(opts.n);
    for (const auto& name : preset_param_names(id, n))
      if (auto it = opts.pins.find(name); it != opts.pins.end()) po.pins[name] = it->second;
    return build_preset(id, po);
  }
  AlgebraPreset nspace(PresetId id) const {
    PresetOptions po;
    po.n = opts.n;
    return preset(id, po);
  }
  std::vector<AlgebraPreset> one_variable() const {
    return {preset(PresetId::D_poly_1), preset(PresetId::D_laurent_1)};
  }

  bool same(const std::string& label, const ShiftOp& lhs, const ShiftOp& rhs, const AlgebraPreset& p) {
    ShiftOp diff = lhs - rhs;
    if (take_fault()) diff -= one_op(p);
    if (diff.is_zero()) return true;
    fail(label + " [" + std::string(preset_name(p.id)) + "]: " + describe(diff, p));
    return false;
  }
  bool eq(const AlgebraPreset& p, const std::string& lhs, const std::string& rhs) {
    return same(lhs + " = " + rhs, eval(p, lhs), eval(p, rhs), p);
  }
  bool same_ext(const std::string& label, const ExtOperator& lhs, ExtOperator rhs) {
    if (take_fault()) rhs += ExtOperator::identity(rhs.params(), rhs.n());
    if (lhs == rhs) return true;
    fail(label);
    return false;
  }
  bool count(const std::string& label, std::size_t got, std::size_t expected) {
    if (take_fault()) ++expected;
    if (got == expected) return true;
    fail(label + ": got " + std::to_string(got) + ", expected " + std::to_string(expected));
    return false;
  }
  bool expect(const std::string& label, bool ok, const std::string& detail = "") {
    if (take_fault()) {
      fail("injected fault: " + label);
      return false;
    }
    if (ok) return true;
    fail(detail.empty() ? label : label + ": " + detail);
    return false;
  }
  void absorb(const Report& r, const std::string& context) {
    if (!expect(context, r.passed(), r.witness)) return;
  }

  bool ok() const { return witness_.empty(); }
  const std::string& witness() const { return witness_; }

 private:
  bool take_fault() {
    bool f = fault_;
    fault_ = false;
    return f;
  }
  void fail(std::string w) {
    if (witness_.empty()) witness_ = std::move(w);
  }

  bool fault_;
  std::string witness_;
};

// --- one variable -----------------------------------------------------------

const char* kD[] = {"dm1", "d", "d1"};
std::string da(int a) { return kD[a + 1]; }

// Defining relations of the one-variable algebra written for the letters
// (x, d_{-1}, d_0, d_1).
std::vector<std::pair<std::string, std::string>> weyl_one_relations(const std::string& x,
                                                                    const std::string (&d)[3]) {
  std::vector<std::pair<std::string, std::string>> r;
  for (int a = -1; a <= 1; ++a)
    r.push_back({d[a + 1] + "*" + x + " - " + qpow("q", a) + "*" + x + "*" + d[a + 1], "1"});
  for (auto [a, b] : {std::pair{1, 0}, {1, -1}, {0, -1}})
    r.push_back({d[a + 1] + "*" + x + "*" + d[b + 1], d[b + 1] + "*" + x + "*" + d[a + 1]});
  r.push_back({d[0] + "*" + d[2], "q*" + d[2] + "*" + d[0]});
  return r;
}

void check_weyl_relation(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (int a = -1; a <= 1; ++a) c.eq(p, da(a) + "*x - " + qpow("q", a) + "*x*" + da(a), "1");
}

void check_inserted_x(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (auto [a, b] : {std::pair{1, 0}, {1, -1}, {0, -1}})
      c.eq(p, da(a) + "*x*" + da(b), da(b) + "*x*" + da(a));
}

void check_d1_dm1(Ctx& c) {
  for (const auto& p : c.one_variable()) c.eq(p, "dm1*d1", "q*d1*dm1");
}

void check_xdd(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) {
        if (a == b) continue;
        c.eq(p, "x*(" + qpow("q", a) + "*" + da(a) + "*" + da(b) + " - " + qpow("q", b) + "*" + da(b) + "*" + da(a) + ")",
             da(a) + " - " + da(b));
      }
}

void check_ddx(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b) {
        if (a == b) continue;
        c.eq(p, "(" + qpow("q", a) + "*" + da(a) + "*" + da(b) + " - " + qpow("q", b) + "*" + da(b) + "*" + da(a) + ")*x",
             qpow("q", a) + "*" + da(a) + " - " + qpow("q", b) + "*" + da(b));
      }
}

// (g)^n, or 1 when n = 0.
std::string power(const std::string& g, int64_t n) { return n == 0 ? "1" : "(" + g + ")^" + str(n); }

void check_d_xn(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (int a = -1; a <= 1; ++a)
      for (int64_t n = 1; n <= 8; ++n)
        c.eq(p, da(a) + "*" + power("x", n) + " - " + qpow("q", a * n) + "*" + power("x", n) + "*" + da(a),
             qnum("q", n, a) + "*" + power("x", n - 1));
}

void check_dn_x(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (int a = -1; a <= 1; ++a)
      for (int64_t n = 1; n <= 8; ++n)
        c.eq(p, power(da(a), n) + "*x - " + qpow("q", a * n) + "*x*" + power(da(a), n),
             qnum("q", n, a) + "*" + power(da(a), n - 1));
}

void check_x_d1_dm1(Ctx& c) {
  for (const auto& p : c.one_variable()) c.eq(p, "(q - 1)*x*d1*dm1", "d1 - dm1");
}

void check_d1_x_dm1(Ctx& c) {
  for (const auto& p : c.one_variable()) c.eq(p, "q*d1 - dm1", "(q - 1)*d1*x*dm1");
}

void check_d1_dm1_x(Ctx& c) {
  for (const auto& p : c.one_variable()) c.eq(p, "(q - 1)*d1*dm1*x", "q*d1 - q^-1*dm1");
}

void check_sigma_inverses(Ctx& c) {
  for (const auto& p : c.one_variable()) {
    c.eq(p, "s1*sm1", "1");
    c.eq(p, "sm1*s1", "1");
    c.eq(p, "(1 + (q - 1)*x*d1)*(1 + (q^-1 - 1)*x*dm1)", "1");
    c.eq(p, "(1 + (q^-1 - 1)*x*dm1)*(1 + (q - 1)*x*d1)", "1");
    c.eq(p, "s1", "1 + (q - 1)*x*d1");
    c.eq(p, "sm1", "1 + (q^-1 - 1)*x*dm1");
    c.eq(p, "s1", "q^-1*(1 + (q - 1)*d1*x)");
    c.eq(p, "sm1", "q*(1 + (q^-1 - 1)*dm1*x)");
    c.eq(p, "dm1", "sm1*d1");
    for (int a = -1; a <= 1; ++a)
      for (int b : {1, -1}) {
        std::string sb = b > 0 ? "s1" : "sm1";
        c.eq(p, da(a) + "*" + sb, qpow("q", b) + "*" + sb + "*" + da(a));
      }
  }
}

void check_cubic(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (int a : {1, -1}) {
      std::string d = da(a), qa = qpow("q", a);
      c.eq(p,
           qpow("q", 2 * a) + "*" + d + "^2*d + d^2*" + d + " - (" + qa + " + 1)*d*" + d + "*d + d*" + d + "^2 + " + qa +
               "*" + d + "*d^2 - 2*" + qa + "*" + d + "*d*" + d,
           "0");
    }
}

void check_ddd(Ctx& c) {
  for (const auto& p : c.one_variable()) c.eq(p, "dm1*d*d1", "q^2*d1*d*dm1");
}

void check_ddnd(Ctx& c) {
  for (const auto& p : c.one_variable())
    for (int64_t n = 0; n <= 8; ++n)
      c.eq(p, "dm1*" + power("d", n) + "*d1", qpow("q", n + 1) + "*d1*" + power("d", n) + "*dm1");
}

void check_five_term(Ctx& c) {
  for (const auto& p : c.one_variable()) c.eq(p, "d*dm1", "d*d1 - q*d1*d + (q - 1)*d1*dm1 + q^-1*dm1*d");
}

void check_cubic_mixed(Ctx& c) {
  for (const auto& p : c.one_variable())
    c.eq(p, "d*d1*dm1", "q^-1*d1*dm1*d + q^-1*d*d1^2 - q*d1^2*d - 2*(1 - q)*d1^2*dm1");
}

void check_six_term(Ctx& c) {
  for (const auto& p : c.one_variable()) {
    c.eq(p, "d*d1 - q*d1*d + q*d1*dm1 - q^-1*dm1*d1 + q^-1*dm1*d - d*dm1", "0");
    c.eq(p, "(1 - q^-1)*dm1*x*d*d1", "d*d1 - d*dm1");
    c.eq(p, "(1 - q^-1)*dm1*d*x*d1", "q*d1*d - q^-1*dm1*d");
    // d1 x dm1 relation directly, then the substitution chain that replaces
    // dm1 d1 = q d1 dm1.
    c.eq(p, "q*d1 - dm1", "(q - 1)*d1*x*dm1");
    c.eq(p, "dm1", "(1 + (q^-1 - 1)*x*dm1)*d1");
    c.eq(p, "d1*dm1", "(d1 + (q^-1 - 1)*d1*x*dm1)*d1");
    c.eq(p, "(d1 + (q^-1 - 1)*d1*x*dm1)*d1", "(1 + (q^-1 - 1)*dm1*x)*d1^2");
    c.eq(p, "(1 + (q^-1 - 1)*dm1*x)*d1^2", "q^-1*dm1*d1");
  }
}

void check_sigma_x(Ctx& c) {
  for (const auto& p : c.one_variable()) {
    c.eq(p, "s1*x", "q*x*s1");
    c.eq(p, "sm1*x", "q^-1*x*sm1");
    c.eq(p, "s1*d", "q^-1*d*s1");
  }
}

void check_w_relations(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::D_laurent_1);
  c.eq(p, "wm1*w1", "q^2*w1*wm1");
  c.eq(p, "xinv*w1", "q*w1*xinv");
  c.eq(p, "xinv*wm1", "q^-1*wm1*xinv");
  c.eq(p, "q*w1*wm1", "xinv^2");
  c.eq(p, "w1", "xinv*s1");
  c.eq(p, "wm1", "xinv*sm1");
  c.eq(p, "w1", "xinv + (q - 1)*d1");
  c.eq(p, "wm1", "xinv + (q^-1 - 1)*dm1");
  for (int32_t n = -3; n <= 6; ++n)
    for (int s : {1, -1}) {
      QPolynomial got = act(p.generator(s > 0 ? "w1" : "wm1"), p.monomial({n}));
      QPolynomial want = p.monomial({n - 1}, p.params->power(0, s * n));
      c.expect((s > 0 ? "w1" : "wm1") + std::string(" on x^") + str(n), got == want,
               render(got, p.var_names));
    }
}

void check_d_w(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::D_laurent_1);
  c.eq(p, "d*w1", "q*w1*d - xinv*w1");
  c.eq(p, "d*wm1", "q^-1*wm1*d - xinv*wm1");
  c.eq(p, "d*xinv", "xinv*d - xinv^2");
  c.expect("printed form d*xinv = -xinv*d - xinv^2 is not an identity",
           !(eval(p, "d*xinv") == eval(p, "-xinv*d - xinv^2")));
}

// --- anti-isomorphisms --------------------------------------------------------

Word single(const Scalar& c, std::vector<std::string> letters) { return Word{c, std::move(letters)}; }

ShiftOp reversed_image(const AntiMap& map, const std::vector<Word>& words, const AlgebraPreset& p) {
  ShiftOp r = zero_op(p);
  for (const auto& w : words) {
    ShiftOp t = one_op(p);
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
      auto m = map.find(*it);
      if (m == map.end()) throw PreconditionViolated("map has no image for generator '" + *it + "'");
      ShiftOp img = one_op(p);
      for (const auto& l : m->second.letters) img = img * p.generator(l);
      t = t * (m->second.coeff * img);
    }
    r += w.coeff * t;
  }
  return r;
}

void check_one_variable_opposite(Ctx& c) {
  for (const auto& p : c.one_variable()) {
    std::string where = std::string(preset_name(p.id));
    c.absorb(check_antihom(one_variable_opposite_map(p), p), "opposite map on " + where);
    AntiMap m = one_variable_opposite_map(p);
    Scalar q = p.params->param(0);
    // Images of the alternative generators through their defining expressions.
    std::vector<Word> s1 = {single(Scalar(1), {}), single(q - Scalar(1), {"x", "d1"})};
    std::vector<Word> sm1 = {single(Scalar(1), {}), single(q.inverse() - Scalar(1), {"x", "dm1"})};
    c.same("Phi(s1) = q^-1 sm1", reversed_image(m, s1, p), eval(p, "q^-1*sm1"), p);
    c.same("Phi(sm1) = q s1", reversed_image(m, sm1, p), eval(p, "q*s1"), p);
    Report id = check_antihom(identity_map(p), p);
    c.expect("identity map is not an anti-homomorphism on " + where, !id.passed());
  }
}

// --- several commuting variables ----------------------------------------------

std::string dname(int k, std::size_t i) {
  const char* stem = k < 0 ? "dqm" : (k == 0 ? "d" : "dq");
  return stem + str(static_cast<int64_t>(i + 1));
}

void check_commutative_table(Ctx& c) {
  AlgebraPreset p = c.nspace(PresetId::D_poly_n);
  std::size_t n = p.n;
  for (std::size_t i = 0; i < n; ++i)
    for (int k = -1; k <= 1; ++k) {
      ShiftOp dk = p.generator(dname(k, i));
      IVec kei = unit_vec(n, i, k), ei = unit_vec(n, i);
      for (std::size_t j = 0; j < n; ++j) {
        ShiftOp xj = p.generator("x" + str(j + 1));
        c.same("[" + dname(k, i) + ", x" + str(j + 1) + "]", dk * xj - xj * dk,
               i == j ? sigma_of(p, kei) : zero_op(p), p);
        if (i == j) continue;
        for (int m = -1; m <= 1; ++m) {
          ShiftOp dm = p.generator(dname(m, j));
          c.same("[" + dname(k, i) + ", " + dname(m, j) + "]", dk * dm - dm * dk, zero_op(p), p);
        }
        for (int32_t s : {1, -1}) {
          IVec a = unit_vec(n, j, s);
          a[(j + 1) % n == i ? (j + 2) % n : (j + 1) % n] = s;
          for (const IVec& g : {unit_vec(n, j, s), a}) {
            if (g[i] != 0) continue;
            ShiftOp sg = sigma_of(p, g);
            c.same("[" + dname(k, i) + ", " + sigma_name({g.data(), g.size()}) + "]", dk * sg - sg * dk, zero_op(p), p);
          }
        }
      }
      ShiftOp si = sigma_of(p, ei);
      c.same("s" + str(i + 1) + " " + dname(k, i) + " = q_i^-1 " + dname(k, i) + " s" + str(i + 1), si * dk,
             p.params->power(i, -1) * dk * si, p);
    }
}

// --- quantum plane --------------------------------------------------------------

void check_plane_factors(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::QuantumPlane);
  const std::vector<std::string> dx = {"x", "dxm1", "dx", "dx1"};
  const std::vector<std::string> dy = {"ry", "dym1", "dy", "dy1"};
  for (const auto& a : dx)
    for (const auto& b : dy) c.eq(p, a + "*" + b, b + "*" + a);
  const std::string lx[3] = {"dxm1", "dx", "dx1"}, ly[3] = {"dym1", "dy", "dy1"};
  for (const auto& [l, r] : weyl_one_relations("x", lx)) c.eq(p, l, r);
  for (const auto& [l, r] : weyl_one_relations("ry", ly)) c.eq(p, l, r);
  c.eq(p, "x", "rx*sy");
  c.eq(p, "y", "ry*sxinv");
}

int64_t det2(const std::vector<std::vector<int64_t>>& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

void check_bicharacter_lattice(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::QuantumPlane);
  struct Case {
    std::vector<std::vector<int64_t>> exps;  // beta(e_i, e_j) = q^exps[i][j]
    IVec sx, sy;                             // gamma with sigma_gamma = sigma_x, sigma_y
  };
  const std::vector<Case> cases = {
      {{{1, 0}, {0, 1}}, {1, 0}, {0, 1}},
      {{{0, 1}, {-1, 0}}, {0, -1}, {1, 0}},
      {{{0, 1}, {1, 0}}, {0, 1}, {1, 0}},
  };
  for (std::size_t t = 0; t < cases.size(); ++t) {
    const auto& cs = cases[t];
    Bicharacter b(2, 1);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) b.set(i, j, {cs.exps[i][j]});
    auto weight_op = [&](const IVec& g) {
      return ShiftOp::single(p.params, p.module, IVec{0, 0},
                             ExpPoly::character(p.params, 2, b.weight({g.data(), g.size()})));
    };
    std::string tag = "bicharacter " + str(static_cast<int64_t>(t + 1));
    c.same(tag + ": sigma_x", weight_op(cs.sx), p.generator("sx"), p);
    c.same(tag + ": sigma_y", weight_op(cs.sy), p.generator("sy"), p);
    // The weight operators form the lattice spanned by the rows of the
    // exponent matrix, which is all of Z^2 exactly when the matrix is unimodular.
    int64_t d = det2(cs.exps);
    c.count(tag + ": lattice index", static_cast<std::size_t>(d < 0 ? -d : d), 1);
  }
}

// --- quantum n-space ----------------------------------------------------------

std::string nm(const char* stem, std::size_t i) { return stem + str(static_cast<int64_t>(i + 1)); }

void check_relations_of(Ctx& c, const AlgebraPreset& p) {
  for (const auto& r : p.relations)
    c.same(r.label, eval_words(r.terms, [&](const std::string& l) { return p.generator(l); }, p), zero_op(p), p);
}

void check_delta_relations(Ctx& c) {
  AlgebraPreset p = c.nspace(PresetId::Delta_n);
  std::size_t n = p.n;
  check_relations_of(c, p);
  for (std::size_t i = 0; i < n; ++i)
    c.same("r" + str(i + 1) + " del" + str(i + 1) + " = m_" + str(i + 1), p.generator(nm("r", i)) * p.generator(nm("del", i)),
           ShiftOp::single(p.params, p.module, IVec(n, 0), ExpPoly::variable(p.params, n, i)), p);
  // delta_I(x_I) = I! and delta_I(x_J) = 0 when some j_r < i_r.
  IVec I(n, 0);
  while (true) {
    ShiftOp dI = one_op(p);
    for (std::size_t r = 0; r < n; ++r) dI = dI * p.generator(nm("del", r)).pow(I[r]);
    IVec J(n, 0);
    while (true) {
      QPolynomial got = act(dI, p.monomial(J));
      bool below = false;
      for (std::size_t r = 0; r < n; ++r) below = below || J[r] < I[r];
      std::string label = "delta_" + render(p.monomial(I), p.var_names) + " on " + render(p.monomial(J), p.var_names);
      if (J == I) {
        mpz_class f = 1;
        for (std::size_t r = 0; r < n; ++r)
          for (int32_t k = 2; k <= I[r]; ++k) f *= k;
        c.expect(label, got == p.monomial(IVec(n, 0), Scalar(Rational(f))), render(got, p.var_names));
      } else if (below) {
        c.expect(label, got.is_zero(), render(got, p.var_names));
      }
      std::size_t r = 0;
      while (r < n && J[r] == 2) J[r++] = 0;
      if (r == n) break;
      ++J[r];
    }
    std::size_t r = 0;
    while (r < n && I[r] == 2) I[r++] = 0;
    if (r == n) break;
    ++I[r];
  }
}

void check_lambda_rho_sigma(Ctx& c) {
  AlgebraPreset p = c.nspace(PresetId::Delta_n);
  std::size_t n = p.n;
  std::vector<IVec> gammas;
  for (std::size_t k = 0; k < n; ++k) {
    gammas.push_back(unit_vec(n, k));
    gammas.push_back(unit_vec(n, k, -1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    IVec ei = unit_vec(n, i), mei = unit_vec(n, i, -1);
    ShiftOp li = p.generator(nm("x", i)), ri = p.generator(nm("r", i)), di = p.generator(nm("del", i));
    c.same("x" + str(i + 1) + " = r" + str(i + 1) + " s" + str(i + 1), li, ri * sigma_of(p, ei), p);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      IVec ej = unit_vec(n, j);
      ShiftOp lj = p.generator(nm("x", j)), dj = p.generator(nm("del", j));
      c.same("x_i x_j = q_ij x_j x_i", li * lj, beta(p, ei, ej) * lj * li, p);
      c.same("del_i del_j = q_ji del_j del_i", di * dj, beta(p, ej, ei) * dj * di, p);
    }
    for (const auto& a : gammas) {
      ShiftOp sa = sigma_of(p, a), sma = *sa.inverse();
      c.same("sigma_a x_i = beta(a, e_i) x_i sigma_a", sa * li, beta(p, a, ei) * li * sa, p);
      c.same("sigma_a del_i = beta(a, -e_i) del_i sigma_a", sa * di, beta(p, a, mei) * di * sa, p);
      c.same("gamma . r_i = beta(gamma, e_i) r_i", sa * ri * sma, beta(p, a, ei) * ri, p);
      c.same("gamma . del_i = beta(gamma, e_i)^-1 del_i", sa * di * sma, beta(p, a, ei).inverse() * di, p);
      for (const auto& b : gammas) {
        ShiftOp sb = sigma_of(p, b);
        c.same("sigma_a sigma_b = sigma_b sigma_a", sa * sb, sb * sa, p);
      }
    }
  }
}

void check_delta_commutators(Ctx& c) {
  AlgebraPreset p = c.nspace(PresetId::Delta_n);
  std::size_t n = p.n;
  for (std::size_t i = 0; i < n; ++i) {
    ShiftOp di = p.generator(nm("del", i)), pi = p.generator(nm("d", i));
    for (std::size_t j = 0; j < n; ++j) {
      ShiftOp lj = p.generator(nm("x", j)), rj = p.generator(nm("r", j));
      c.same("[del" + str(i + 1) + ", x" + str(j + 1) + "]", di * lj - lj * di,
             i == j ? sigma_of(p, unit_vec(n, i)) : zero_op(p), p);
      c.same("[d" + str(i + 1) + ", r" + str(j + 1) + "]", pi * rj - rj * pi,
             i == j ? sigma_of(p, unit_vec(n, i, -1)) : zero_op(p), p);
      QPolynomial got = act(pi, p.monomial(unit_vec(n, j)));
      c.expect("d" + str(i + 1) + "(x" + str(j + 1) + ")",
               got == (i == j ? p.monomial(IVec(n, 0)) : QPolynomial(p.params, p.module)), render(got, p.var_names));
    }
    // delta_i(x^m) = m_i prod_{j > i} q_ij^{m_j} x^{m - e_i}
    IVec m(n, 0);
    while (true) {
      QPolynomial got = act(di, p.monomial(m));
      QPolynomial want(p.params, p.module);
      if (m[i] > 0) {
        Scalar coef = Scalar(m[i]);
        for (std::size_t j = i + 1; j < n; ++j) coef = coef * beta(p, unit_vec(n, i), unit_vec(n, j)).pow(m[j]);
        IVec t = m;
        --t[i];
        want = p.monomial(t, coef);
      }
      c.expect("del" + str(i + 1) + " on " + render(p.monomial(m), p.var_names), got == want, render(got, p.var_names));
      std::size_t r = 0;
      while (r < n && m[r] == 3) m[r++] = 0;
      if (r == n) break;
      ++m[r];
    }
  }
}

void check_commutator_formula(Ctx& c) {
  AlgebraPreset p = c.nspace(PresetId::Delta_n);
  std::size_t n = p.n;
  std::vector<IVec> as = {IVec(n, 0)};
  for (std::size_t k = 0; k < n; ++k) {
    as.push_back(unit_vec(n, k));
    as.push_back(unit_vec(n, k, -1));
  }
  std::vector<IVec> js;
  IVec J(n, 0);
  while (true) {
    int64_t s = 0;
    for (auto v : J) s += v;
    if (s <= 2) js.push_back(J);
    std::size_t r = 0;
    while (r < n && J[r] == 2) J[r++] = 0;
    if (r == n) break;
    ++J[r];
  }
  auto delta_J = [&](const IVec& j) {
    ShiftOp d = one_op(p);
    for (std::size_t r = 0; r < n; ++r) d = d * p.generator(nm("del", r)).pow(j[r]);
    return d;
  };
  for (const auto& j : js)
    for (const auto& a : as)
      for (std::size_t i = 0; i < n; ++i) {
        IVec ei = unit_vec(n, i), ai = a;
        ++ai[i];
        ShiftOp xi = p.generator(nm("x", i));
        ShiftOp lhs = delta_J(j) * sigma_of(p, a);
        lhs = lhs * xi - xi * lhs;
        Scalar b = beta(p, a, ei);
        Scalar after(1), all(1);
        for (std::size_t s = 0; s < n; ++s) {
          Scalar qsi = beta(p, unit_vec(n, s), ei).pow(j[s]);
          all = all * qsi;
          if (s > i) after = after * qsi;
        }
        ShiftOp rhs = zero_op(p);
        if (j[i] > 0) {
          IVec jm = j;
          --jm[i];
          rhs += (Scalar(j[i]) * after * b) * delta_J(jm) * sigma_of(p, ai);
        }
        rhs += ((b - Scalar(1)) * all) * p.generator(nm("r", i)) * delta_J(j) * sigma_of(p, ai);
        c.same("[delta_J sigma_a, x_i] with J = " + render(p.monomial(j), p.var_names) + ", a = " + sigma_name({a.data(), a.size()}) +
                   ", i = " + str(i + 1),
               lhs, rhs, p);
      }
}

void check_weyl_lambda(Ctx& c) {
  AlgebraPreset delta = c.nspace(PresetId::Delta_n);
  PresetOptions wo;
  wo.n = delta.n;
  AlgebraPreset w = c.preset(PresetId::WeylLambda_n, wo);
  auto theta = [&](const std::string& l) { return delta.generator((l[0] == 'u' ? "del" : "r") + l.substr(1)); };
  for (const auto& r : w.relations) c.same("theta(" + r.label + ")", eval_words(r.terms, theta, delta), zero_op(delta), delta);
  for (std::size_t k : {1, 2}) {
    PresetOptions o;
    o.n = k;
    AlgebraPreset small = c.preset(PresetId::WeylLambda_n, o);
    if (small.generators.empty()) continue;
    check_relations_of(c, small);
  }
}

// --- quantum tori ---------------------------------------------------------------

void check_torus_identities(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::Torus_A3);
  c.eq(p, "ry", "y*sx");
  c.eq(p, "ryinv", "sxinv*yinv");
  c.eq(p, "dx1", "(q - 1)^-1*xinv*(sx - 1)");
  c.eq(p, "dxm1", "(q^-1 - 1)^-1*xinv*(sxinv - 1)");
  c.eq(p, "dy1", "(q - 1)^-1*ryinv*(sy - 1)");
  c.eq(p, "dym1", "(q^-1 - 1)^-1*ryinv*(syinv - 1)");
}

void check_torus_sigma(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::Torus_A3);
  c.eq(p, "sx*x", "q*x*sx");
  c.eq(p, "sx*dx", "q^-1*dx*sx");
  c.eq(p, "sx*y", "y*sx");
  c.eq(p, "sx*(dy*sx)", "(dy*sx)*sx");
  c.eq(p, "syinv*x", "x*syinv");
  c.eq(p, "syinv*dx", "dx*syinv");
  c.eq(p, "syinv*y", "q^-1*y*syinv");
  c.eq(p, "syinv*(dy*sx)", "q*(dy*sx)*syinv");
  c.eq(p, "syinv*sx", "sx*syinv");
  Scalar q = p.params->param(0);
  std::vector<std::vector<Scalar>> lambda = {{Scalar(1), q}, {q.inverse(), Scalar(1)}};
  AlgebraPreset w = weyl_lambda(2, lambda, p.params);
  const std::map<std::string, std::string> theta = {{"u1", "dx"}, {"u2", "dy*sx"}, {"v1", "x"}, {"v2", "y"}};
  for (const auto& r : w.relations)
    c.same("theta(" + r.label + ")", eval_words(r.terms, [&](const std::string& l) { return eval(p, theta.at(l)); }, p),
           zero_op(p), p);
}

void check_torus_opposite(Ctx& c) {
  for (std::size_t s = 0; s <= c.opts.n; ++s) {
    PresetOptions o;
    o.n = c.opts.n;
    o.laurent_count = s;
    AlgebraPreset p = c.preset(PresetId::SkewGroup_n, o);
    std::string where = " with " + str(static_cast<int64_t>(s)) + " Laurent variables";
    c.absorb(check_antihom(torus_opposite_map(p), p), "opposite map" + where);
    c.expect("literal opposite map is not an anti-homomorphism" + where,
             !check_antihom(torus_opposite_map_literal(p), p).passed());
  }
}

// --- delegated counts -------------------------------------------------------------

void check_dimensions(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::D_poly_1);
  auto h = hilbert_coefficients(6);
  c.expect("hilbert_coefficients(6)", h == std::vector<std::size_t>{1, 3, 7, 13, 21, 31, 43});
  for (std::size_t n = 1; n <= 5; ++n) {
    DimResult r = graded_dimension(p, {"d", "d1", "dm1"}, n);
    c.count("dim G_" + std::to_string(n), r.dimension, n * n + n + 1);
    c.count("Hilbert coefficient " + std::to_string(n), h[n], n * n + n + 1);
  }
  for (int64_t n = 1; n <= 8; ++n)
    c.count("special monomials of degree " + str(n), special_monomials("d1", "d", n).size(),
            static_cast<std::size_t>((n * n + n + 2) / 2));
}

void check_exterior(Ctx& c) {
  std::map<std::string, Rational> pins;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& name : preset_param_names(PresetId::Exterior_n, n))
      if (auto it = c.opts.pins.find(name); it != c.opts.pins.end()) pins[name] = it->second;
    MatrixUnitResult r = exterior_matrix_units(n, pins);
    c.absorb(r.report, "matrix units for n = " + std::to_string(n));
    c.count("span of matrix units for n = " + std::to_string(n), r.span_dimension, std::size_t(1) << (2 * n));
  }
}

void check_claim_cofactors(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::D_poly_1);
  for (int64_t j = 1; j <= 6; ++j) {
    Coordinates psi = claim_cofactor(j, p);
    std::string lhs = qnum("q", j, 1) + "*" + power("d", j) + " - " + str(j) + "*" + qpow("q", j) + "*d1*" + power("d", j - 1);
    c.same("claim cofactor j = " + str(j), eval(p, lhs), expand(psi, p) * p.generator("x"), p);
    if (j == 1) c.same("psi_1 = d d1 - q d1 d", expand(psi, p), eval(p, "d*d1 - q*d1*d"), p);
  }
}

void check_ore(Ctx& c) {
  AlgebraPreset p = c.preset(PresetId::D_poly_1);
  c.eq(p, "d*x^2", "x*(x*d + 2)");
  c.eq(p, "d1*x^2", "x*(q^2*x*d1 + q + 1)");
  c.eq(p, "dm1*x^2", "x*(q^-2*x*dm1 + q^-1 + 1)");
  c.eq(p, "x*(x*d)", "(x*d - 1)*x");
  c.eq(p, "x*((q - 1)*x*d1 + 1)", "q^-1*((q - 1)*x*d1 + 1)*x");
  const std::pair<const char*, const char*> cases[] = {
      {"d", "x*d + 2"}, {"d1", "q^2*x*d1 + q + 1"}, {"dm1", "q^-2*x*dm1 + q^-1 + 1"}};
  for (const auto& [g, cof] : cases) {
    OreWitness w = ore_witness(p.generator(g), 1, 4, p);
    c.count(std::string("Ore exponent for ") + g, static_cast<std::size_t>(w.k), 2);
    c.same(std::string("Ore cofactor for ") + g, expand(w.cofactor, p), eval(p, cof), p);
  }
}

struct Entry {
  CheckInfo info;
  void (*fn)(Ctx&);
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {{"R1", "D_poly_1,D_laurent_1", "∂_a x − qᵃx∂_a = 1"}, check_weyl_relation},
      {{"R2", "D_poly_1,D_laurent_1", "∂_a x ∂_b = ∂_b x ∂_a"}, check_inserted_x},
      {{"R3", "D_poly_1,D_laurent_1", "∂₋₁∂₁ = q∂₁∂₋₁"}, check_d1_dm1},
      {{"R4", "D_poly_1,D_laurent_1", "x(qᵃ∂_a∂_b − qᵇ∂_b∂_a) = ∂_a − ∂_b"}, check_xdd},
      {{"R5", "D_poly_1,D_laurent_1", "(qᵃ∂_a∂_b − qᵇ∂_b∂_a)x = qᵃ∂_a − qᵇ∂_b"}, check_ddx},
      {{"R6", "D_poly_1,D_laurent_1", "∂_a xⁿ − q^{an}xⁿ∂_a = [n]_{qᵃ}x^{n−1}"}, check_d_xn},
      {{"R7", "D_poly_1,D_laurent_1", "∂_aⁿx − q^{an}x∂_aⁿ = [n]_{qᵃ}∂_a^{n−1}"}, check_dn_x},
      {{"R8", "D_poly_1,D_laurent_1", "(q−1)x∂₁∂₋₁ = ∂₁ − ∂₋₁"}, check_x_d1_dm1},
      {{"R9", "D_poly_1,D_laurent_1", "q∂₁ − ∂₋₁ = (q−1)∂₁x∂₋₁"}, check_d1_x_dm1},
      {{"R10", "D_poly_1,D_laurent_1", "(q−1)∂₁∂₋₁x = q∂₁ − q⁻¹∂₋₁"}, check_d1_dm1_x},
      {{"R11", "D_poly_1,D_laurent_1", "σ₁ and σ₋₁ are inverses; ∂₋₁ = σ₋₁∂₁; ∂_aσ_b = qᵇσ_b∂_a"}, check_sigma_inverses},
      {{"R12", "D_poly_1,D_laurent_1", "homogeneous cubic relations hold in D and in E"}, check_cubic},
      {{"R13", "D_poly_1,D_laurent_1", "∂₋₁∂∂₁ = q²∂₁∂∂₋₁"}, check_ddd},
      {{"R14", "D_poly_1,D_laurent_1", "∂₋₁∂ⁿ∂₁ = qⁿ⁺¹∂₁∂ⁿ∂₋₁"}, check_ddnd},
      {{"R15", "D_poly_1,D_laurent_1", "∂∂₋₁ = ∂∂₁ − q∂₁∂ + (q−1)∂₁∂₋₁ + q⁻¹∂₋₁∂"}, check_five_term},
      {{"R16", "D_poly_1,D_laurent_1", "∂∂₁∂₋₁ = q⁻¹∂₁∂₋₁∂ + q⁻¹∂∂₁² − q∂₁²∂ − 2(1−q)∂₁²∂₋₁"}, check_cubic_mixed},
      {{"R17", "D_poly_1,D_laurent_1", "quadratic relation is observed"}, check_six_term},
      {{"R18", "D_poly_1,D_laurent_1", "σ₁x = qxσ₁"}, check_sigma_x},
      {{"R19", "D_laurent_1", "w₋₁w₁ = q²w₁w₋₁ … qw₁w₋₁ = x⁻²"}, check_w_relations},
      {{"R20", "D_laurent_1", "easy to check the following relations"}, check_d_w},
      {{"R21", "D_poly_1,D_laurent_1", "Use the generators to define Φ"}, check_one_variable_opposite},
      {{"R22", "D_poly_n", "The following relations can be seen"}, check_commutative_table},
      {{"R23", "QuantumPlane", "D_x ⊗ D_y ≅ D_q(R) as filtered algebras"}, check_plane_factors},
      {{"R24", "QuantumPlane", "D_q⁰(R) is the same algebra in each case"}, check_bicharacter_lattice},
      {{"R25", "Delta_n", "The relations among these generators are"}, check_delta_relations},
      {{"R26", "Delta_n", "λ_{x_i}=ρ_{x_i}σ_{e_i}"}, check_lambda_rho_sigma},
      {{"R27", "Delta_n", "[δ_i, λ_{x_i}]=σ_{e_i}"}, check_delta_commutators},
      {{"R28", "Delta_n", "[δ_1^{j_1}⋯δ_n^{j_n}σ_a, x_i]"}, check_commutator_formula},
      {{"R29", "WeylLambda_n,Delta_n", "subject to the relations"}, check_weyl_lambda},
      {{"R30", "Torus_A3", "Using the identities"}, check_torus_identities},
      {{"R31", "Torus_A3", "σ₁∂ = q⁻¹∂σ₁ analogues"}, check_torus_sigma},
      {{"R32", "SkewGroup_n", "Φ(∂_i) = −(σ_{−e_i}∂_i)ᵒ"}, check_torus_opposite},
      {{"R33", "D_poly_1", "dim G_n = n²+n+1"}, check_dimensions},
      {{"R34", "Exterior_n", "The algebra D_q(R)=Hom_K(R,R)"}, check_exterior},
      {{"R35", "D_poly_1", "[j]_q∂ʲ − jqʲ∂₁∂^{j−1} ∈ Dx"}, check_claim_cofactors},
      {{"R36", "D_poly_1", "∂x² = x(x∂+2)"}, check_ore},
  };
  return e;
}

void validate_pins(const VerifyOptions& o) {
  std::set<std::string> known;
  for (PresetId id : all_presets())
    for (const auto& name : preset_param_names(id, std::max<std::size_t>(o.n, 3))) known.insert(name);
  for (const auto& [k, v] : o.pins) {
    if (!known.count(k)) throw PreconditionViolated("unknown parameter '" + k + "'");
    ParamField f({k});
    f.pin(0, v);
    check_generic_pins(f);
  }
  if (o.n < 3 || o.n > 12) throw UnsupportedArity("verify needs 3 <= n <= 12");
}

Report run_entry(const Entry& e, const VerifyOptions& opts) {
  bool fault = false;
  for (const auto& g : opts.faults) fault = fault || glob_match(g, e.info.id);
  auto t0 = std::chrono::steady_clock::now();
  Ctx c(opts, fault);
  Report r;
  r.id = e.info.id;
  try {
    e.fn(c);
    if (!c.ok()) r.witness = c.witness();
  } catch (const ConstructionFailed& ex) {
    r.witness = std::string("construction failed: ") + ex.what();
  } catch (const NoWitnessWithinBound& ex) {
    r.witness = ex.what();
  } catch (const DomainGuardViolation& ex) {
    r.witness = std::string("domain guard: ") + ex.what();
  }
  r.status = r.witness.empty() ? CheckStatus::Pass : CheckStatus::Fail;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ExtOperator sparse_product(const ExtOperator& a, const ExtOperator& b) {
  std::size_t d = a.dim();
  std::vector<std::vector<std::size_t>> col_nz(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k)
      if (!a.at(r, k).is_zero()) col_nz[k].push_back(r);
  ExtOperator out(a.params(), a.n());
  for (std::size_t col = 0; col < d; ++col)
    for (std::size_t k = 0; k < d; ++k) {
      const Scalar& bk = b.at(k, col);
      if (bk.is_zero()) continue;
      for (std::size_t r : col_nz[k]) out.set(r, col, out.at(r, col) + a.at(r, k) * bk);
    }
  return out;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> c = [] {
    std::vector<CheckInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return c;
}

Report run_check(const std::string& id, const VerifyOptions& opts) {
  for (const auto& e : entries())
    if (e.info.id == id) {
      validate_pins(opts);
      return run_entry(e, opts);
    }
  throw UnknownCheckId("unknown check id '" + id + "'");
}

std::vector<Report> run_suite(const std::string& filter, const VerifyOptions& opts) {
  validate_pins(opts);
  std::vector<const Entry*> selected;
  for (const auto& e : entries())
    if (glob_match(filter, e.info.id)) selected.push_back(&e);
  std::vector<Report> out(selected.size());
  std::vector<std::exception_ptr> errors(selected.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      try {
        out[i] = run_entry(*selected[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, selected.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Report check_antihom(const AntiMap& map, const AlgebraPreset& preset) {
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.id = "antihom";
  if (preset.is_exterior()) throw PreconditionViolated("check_antihom needs a shift-operator preset");
  for (const auto& rel : preset.relations) {
    ShiftOp img = reversed_image(map, rel.terms, preset);
    if (!img.is_zero()) {
      r.status = CheckStatus::Fail;
      r.witness = "relation " + rel.label + ": image " + describe(img, preset);
      break;
    }
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

AntiMap one_variable_opposite_map(const AlgebraPreset& p) {
  if (p.id != PresetId::D_poly_1 && p.id != PresetId::D_laurent_1)
    throw PreconditionViolated("one_variable_opposite_map needs a one-variable preset");
  Scalar q = p.params->param(0);
  AntiMap m = {
      {"x", single(Scalar(1), {"x"})},
      {"d", single(Scalar(-1), {"d"})},
      {"d1", single(-q.inverse(), {"dm1"})},
      {"dm1", single(-q, {"d1"})},
      {"s1", single(q.inverse(), {"sm1"})},
      {"sm1", single(q, {"s1"})},
  };
  if (p.id == PresetId::D_laurent_1) m["xinv"] = single(Scalar(1), {"xinv"});
  return m;
}

AntiMap torus_opposite_map(const AlgebraPreset& p) {
  if (p.id != PresetId::SkewGroup_n) throw PreconditionViolated("torus_opposite_map needs SkewGroup_n");
  AntiMap m;
  for (std::size_t i = 0; i < p.n; ++i) {
    m[nm("d", i)] = single(Scalar(-1), {nm("s", i), nm("d", i)});
    m[nm("r", i)] = single(Scalar(1), {nm("s", i), nm("r", i)});
    m[nm("s", i)] = single(Scalar(1), {nm("sm", i)});
    m[nm("sm", i)] = single(Scalar(1), {nm("s", i)});
  }
  return m;
}

AntiMap torus_opposite_map_literal(const AlgebraPreset& p) {
  if (p.id != PresetId::SkewGroup_n) throw PreconditionViolated("torus_opposite_map_literal needs SkewGroup_n");
  AntiMap m;
  for (std::size_t i = 0; i < p.n; ++i) {
    m[nm("d", i)] = single(Scalar(-1), {nm("sm", i), nm("d", i)});
    m[nm("r", i)] = single(Scalar(1), {nm("s", i), nm("r", i)});
    m[nm("s", i)] = single(Scalar(1), {nm("s", i)});
    m[nm("sm", i)] = single(Scalar(1), {nm("sm", i)});
  }
  return m;
}

AntiMap identity_map(const AlgebraPreset& p) {
  AntiMap m;
  for (const auto& g : p.generator_names) m[g] = single(Scalar(1), {g});
  return m;
}

MatrixUnitResult exterior_matrix_units(std::size_t n, const std::map<std::string, Rational>& pins) {
  if (n < 1 || n > 6) throw PreconditionViolated("exterior_matrix_units needs 1 <= n <= 6");
  auto t0 = std::chrono::steady_clock::now();
  PresetOptions o;
  o.n = n;
  o.pins = pins;
  AlgebraPreset p = build_preset(PresetId::Exterior_n, o);
  const ExteriorParams& e = *p.exterior;
  MatrixUnitResult out;
  out.report.id = "exterior_matrix_units";
  std::size_t dim = std::size_t(1) << n;
  unsigned full = static_cast<unsigned>(dim - 1);

  ExtOperator phi = ExtOperator::identity(p.params, n);
  for (std::size_t i = 1; i <= n; ++i) phi = sparse_product(exterior_delta(e, i), phi);
  for (std::size_t col = 0; col < dim; ++col)
    for (std::size_t row = 0; row < dim; ++row) {
      bool want_one = col == full && row == 0;
      if (!(phi.at(row, col) == Scalar(want_one ? 1 : 0))) {
        out.report.status = CheckStatus::Fail;
        out.report.witness = "phi on " + exterior_basis_name(static_cast<unsigned>(col)) + " has coefficient " +
                             render(phi.at(row, col), *p.params) + " at " +
                             exterior_basis_name(static_cast<unsigned>(row));
        return out;
      }
    }

  std::vector<ExtOperator> left(dim);
  for (unsigned b = 0; b < dim; ++b) left[b] = exterior_left_mult(e, b);
  std::vector<SparseVec> vecs;
  bool single_entries = true;
  for (unsigned b1 = 0; b1 < dim; ++b1) {
    unsigned b = full ^ b1;
    Scalar c = exterior_product_sign(e, b, b1);
    if (c.is_zero()) throw ConstructionFailed("no complement for " + exterior_basis_name(b1));
    ExtOperator m = sparse_product(phi, left[b]).scaled(c.inverse());
    for (unsigned b2 = 0; b2 < dim; ++b2) {
      ExtOperator u = sparse_product(left[b2], m);
      SparseVec v;
      for (std::size_t row = 0; row < dim; ++row)
        for (std::size_t col = 0; col < dim; ++col) {
          const Scalar& s = u.at(row, col);
          bool unit = row == b2 && col == b1;
          if (!(s == Scalar(unit ? 1 : 0)))
            throw ConstructionFailed("pair (" + exterior_basis_name(b1) + ", " + exterior_basis_name(b2) + ")");
          if (!s.is_zero()) v.emplace_back(row * dim + col, s);
        }
      single_entries = single_entries && v.size() == 1;
      vecs.push_back(std::move(v));
    }
  }
  if (dim * dim <= 256 || !single_entries) {
    out.span_dimension = rank_of_family(vecs, dim * dim, p.params->size());
  } else {
    std::set<std::size_t> axes;
    for (const auto& v : vecs) axes.insert(v.front().first);
    out.span_dimension = axes.size();
  }
  if (out.span_dimension != dim * dim) {
    out.report.status = CheckStatus::Fail;
    out.report.witness = "matrix units span " + std::to_string(out.span_dimension) + " of " + std::to_string(dim * dim);
  }
  out.report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace qdop
