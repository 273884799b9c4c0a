#include "qdop/rewrite.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "qdop/error.hpp"
#include "qdop/kernels.hpp"

namespace qdop {

std::string_view basis_name(BasisId b) {
  switch (b) {
    case BasisId::D_basis: return "D";
    case BasisId::G_basis: return "G";
    case BasisId::PBW_weyl: return "PBW";
    case BasisId::SkewGroup_basis: return "SkewGroup";
    case BasisId::W_basis: return "W";
  }
  return "";
}

std::optional<BasisId> basis_from_name(std::string_view name) {
  for (BasisId b : {BasisId::D_basis, BasisId::G_basis, BasisId::PBW_weyl, BasisId::SkewGroup_basis, BasisId::W_basis})
    if (basis_name(b) == name) return b;
  if (name == "D_basis") return BasisId::D_basis;
  if (name == "G_basis") return BasisId::G_basis;
  if (name == "PBW_weyl") return BasisId::PBW_weyl;
  if (name == "SkewGroup_basis") return BasisId::SkewGroup_basis;
  if (name == "W_basis") return BasisId::W_basis;
  return std::nullopt;
}

std::string BasisElement::descriptor() const {
  if (letters.empty()) return "1";
  std::string out;
  for (const auto& [g, k] : letters) {
    if (!out.empty()) out += "*";
    out += g;
    if (k != 1) out += "^" + std::to_string(k);
  }
  return out;
}

int64_t BasisElement::degree() const {
  int64_t d = 0;
  for (const auto& [g, k] : letters)
    if (!g.starts_with("sg[")) d += k;
  return d;
}

int64_t BasisElement::count(std::string_view letter) const {
  int64_t d = 0;
  for (const auto& [g, k] : letters)
    if (g == letter) d += k;
  return d;
}

ShiftOp evaluate(const BasisElement& b, const AlgebraPreset& preset) {
  ShiftOp r = ShiftOp::identity(preset.params, preset.module);
  for (const auto& [g, k] : b.letters) r = r * preset.generator(g).pow(k);
  return r;
}

ShiftOp expand(const Coordinates& c, const AlgebraPreset& preset) {
  ShiftOp r(preset.params, preset.module);
  for (const auto& t : c) r += evaluate(t.element, preset).scaled(t.coeff);
  return r;
}

namespace {

// Integer or single-term polynomial with positive coefficient, e.g. 3 or 2*q^2.
bool bare_factor(const Scalar& k) {
  if (renders_simple(k)) return true;
  return k.is_polynomial() && k.num().terms().size() == 1 && sgn(k.num().leading().coeff) > 0;
}

}  // namespace

std::string render(const Coordinates& c, const ParamField& field) {
  if (c.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::string d = c[i].element.descriptor();
    const Scalar& k = c[i].coeff;
    std::string cs = render(k, field);
    std::string t;
    if (d == "1")
      t = renders_simple(k) ? cs : "(" + cs + ")";
    else if (k.is_one())
      t = d;
    else if (k == Scalar(-1))
      t = "-" + d;
    else if (bare_factor(k))
      t = cs + "*" + d;
    else if (bare_factor(-k))
      t = "-" + render(-k, field) + "*" + d;
    else
      t = "(" + cs + ")*" + d;
    if (i == 0)
      out = t;
    else if (t[0] == '-')
      out += " - " + t.substr(1);
    else
      out += " + " + t;
  }
  return out;
}

namespace {

using Letters = std::vector<std::pair<std::string, int64_t>>;

BasisElement word(std::initializer_list<std::pair<const char*, int64_t>> parts) {
  BasisElement b;
  for (const auto& [g, k] : parts)
    if (k != 0) b.letters.emplace_back(g, k);
  return b;
}

std::vector<BasisElement> g_elements(int64_t n) {
  std::vector<BasisElement> out;
  for (int64_t a = 0; a <= n; ++a)
    for (int64_t b = 0; a + b <= n; ++b) out.push_back(word({{"d1", a}, {"dm1", b}, {"d", n - a - b}}));
  for (int64_t a = 0; a + 2 <= n; ++a)
    for (int64_t k = 1; a + 1 + k <= n; ++k) out.push_back(word({{"d1", a}, {"d", 1}, {"d1", k}, {"d", n - a - 1 - k}}));
  return out;
}

// x^j d1^k d^l and x^j dm1^k d^l (k > 0) with j > 0, total degree n.
std::vector<BasisElement> d_extra_elements(int64_t n) {
  std::vector<BasisElement> out;
  for (int64_t j = 1; j <= n; ++j)
    for (int64_t k = 0; j + k <= n; ++k) {
      out.push_back(word({{"x", j}, {"d1", k}, {"d", n - j - k}}));
      if (k > 0) out.push_back(word({{"x", j}, {"dm1", k}, {"d", n - j - k}}));
    }
  return out;
}

std::vector<BasisElement> w_elements(int64_t n) {
  std::vector<BasisElement> out = special_monomials("d1", "d", n);
  for (auto& b : special_monomials("dm1", "d", n))
    if (b.count("dm1") > 0) out.push_back(std::move(b));
  return out;
}

void compositions(std::size_t n, int64_t total, std::vector<int64_t>& cur, std::size_t i,
                  std::vector<std::vector<int64_t>>& out) {
  if (i + 1 == n) {
    cur[i] = total;
    out.push_back(cur);
    return;
  }
  for (int64_t k = total; k >= 0; --k) {
    cur[i] = k;
    compositions(n, total - k, cur, i + 1, out);
  }
}

// All vectors in N^n with entry sum exactly total.
std::vector<std::vector<int64_t>> compositions(std::size_t n, int64_t total) {
  std::vector<std::vector<int64_t>> out;
  if (n == 0) {
    if (total == 0) out.emplace_back();
    return out;
  }
  std::vector<int64_t> cur(n, 0);
  compositions(n, total, cur, 0, out);
  return out;
}

std::vector<std::vector<int32_t>> gamma_box(std::size_t n, int32_t b) {
  std::vector<std::vector<int32_t>> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<int32_t>> next;
    for (const auto& g : out)
      for (int32_t v = -b; v <= b; ++v) {
        auto h = g;
        h.push_back(v);
        next.push_back(std::move(h));
      }
    out = std::move(next);
  }
  return out;
}

std::string idx(const char* base, std::size_t i) { return base + std::to_string(i + 1); }

BasisElement pbw_element(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
  BasisElement e;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) e.letters.emplace_back(idx("u", i), a[i]);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) e.letters.emplace_back(idx("v", i), b[i]);
  return e;
}

BasisElement skew_element(const std::vector<int64_t>& I, const std::vector<int64_t>& J, const std::vector<int32_t>& g) {
  BasisElement e;
  for (std::size_t i = 0; i < I.size(); ++i)
    if (I[i]) e.letters.emplace_back(idx("r", i), I[i]);
  for (std::size_t i = 0; i < J.size(); ++i)
    if (J[i]) e.letters.emplace_back(idx("del", i), J[i]);
  if (std::any_of(g.begin(), g.end(), [](int32_t v) { return v != 0; })) e.letters.emplace_back(sigma_name(g), 1);
  return e;
}

// D-family shift: x-power minus the number of derivative letters.
int64_t d_shift(const BasisElement& b) {
  return b.count("x") - b.count("d") - b.count("d1") - b.count("dm1");
}

bool is_one_variable(const AlgebraPreset& p) {
  return p.id == PresetId::D_poly_1 || p.id == PresetId::D_laurent_1;
}

std::vector<BasisElement> d_family_candidates(BasisId basis, int64_t s, const ExpPoly& c, int64_t widen) {
  std::vector<BasisElement> out;
  if (s <= 0) {
    auto g = basis == BasisId::W_basis ? w_elements(-s) : g_elements(-s);
    out.insert(out.end(), g.begin(), g.end());
  }
  if (basis != BasisId::D_basis) return out;
  int64_t A = c.max_character_exponent() + widen;
  int64_t L = std::max<int64_t>(c.degree(), 0) + A + widen;
  for (int64_t k = 0; k <= A; ++k)
    for (int64_t l = 0; l <= L; ++l) {
      int64_t j = s + k + l;
      if (j <= 0) continue;
      out.push_back(word({{"x", j}, {"d1", k}, {"d", l}}));
      if (k > 0) out.push_back(word({{"x", j}, {"dm1", k}, {"d", l}}));
    }
  return out;
}

std::vector<BasisElement> pbw_candidates(const IVec& s, const ExpPoly& c, int64_t widen) {
  std::vector<BasisElement> out;
  std::size_t n = s.size();
  int64_t top = std::max<int64_t>(c.degree(), 0) + widen;
  for (int64_t t = 0; t <= top; ++t)
    for (const auto& a : compositions(n, t)) {
      std::vector<int64_t> b(n);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        b[i] = s[i] + a[i];
        ok = ok && b[i] >= 0;
      }
      if (ok) out.push_back(pbw_element(a, b));
    }
  return out;
}

// Integer gamma with weight(gamma) = target, or nullopt.
std::optional<std::vector<int32_t>> solve_gamma(const Bicharacter& bc, const Character& target) {
  std::size_t n = bc.rank(), s = bc.params();
  std::vector<Character> w;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int32_t> e(n, 0);
    e[i] = 1;
    w.push_back(bc.weight(e));
  }
  ScalarMatrix a;
  std::vector<Scalar> b;
  for (std::size_t t = 0; t < s; ++t)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Scalar> row;
      for (std::size_t i = 0; i < n; ++i) row.emplace_back(long(w[i].at(t, j)));
      a.push_back(std::move(row));
      b.emplace_back(long(target.at(t, j)));
    }
  auto x = solve_exact(a, b);
  if (!x) return std::nullopt;
  std::vector<int32_t> g;
  for (const auto& v : *x) {
    if (!v.is_constant()) return std::nullopt;
    Rational r = v.constant_value();
    if (r.get_den() != 1) return std::nullopt;
    g.push_back(static_cast<int32_t>(r.get_num().get_si()));
  }
  Character chk(s, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < s; ++t)
      for (std::size_t j = 0; j < n; ++j) chk.set(t, j, chk.at(t, j) + g[i] * w[i].at(t, j));
  if (!(chk == target)) return std::nullopt;
  return g;
}

Character character_difference(const Character& a, const Character& b) { return a + (-b); }

std::vector<BasisElement> skew_candidates(const IVec& s, const ExpPoly& c, int64_t widen, const AlgebraPreset& p) {
  std::vector<BasisElement> out;
  std::size_t n = s.size();
  int64_t top = std::max<int64_t>(c.degree(), 0) + widen;
  for (int64_t t = 0; t <= top; ++t)
    for (const auto& J : compositions(n, t)) {
      std::vector<int64_t> I(n);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        I[i] = s[i] + J[i];
        ok = ok && I[i] >= 0;
      }
      if (!ok) continue;
      BasisElement base = skew_element(I, J, std::vector<int32_t>(n, 0));
      ShiftOp op = evaluate(base, p);
      if (op.terms().size() != 1) throw InvariantBreach("skew-group basis element is not a single shift");
      std::vector<std::vector<int32_t>> seen;
      for (const auto& bt : op.terms()[0].coeff.terms())
        for (const auto& tt : c.terms()) {
          auto g = solve_gamma(p.bichar, character_difference(tt.chr, bt.chr));
          if (!g || std::find(seen.begin(), seen.end(), *g) != seen.end()) continue;
          seen.push_back(*g);
          out.push_back(skew_element(I, J, *g));
        }
    }
  return out;
}

void check_basis_preset(BasisId basis, const AlgebraPreset& p) {
  switch (basis) {
    case BasisId::D_basis:
    case BasisId::G_basis:
    case BasisId::W_basis:
      if (!is_one_variable(p)) throw PreconditionViolated("basis needs a one-variable preset");
      break;
    case BasisId::PBW_weyl:
      if (p.id != PresetId::WeylLambda_n || !p.has("u1")) throw PreconditionViolated("PBW basis needs WeylLambda_n");
      break;
    case BasisId::SkewGroup_basis:
      if (p.id != PresetId::SkewGroup_n) throw PreconditionViolated("skew-group basis needs SkewGroup_n");
      break;
  }
}

struct AxisKey {
  IVec shift;
  ExpAxis axis;
};

struct AxisKeyLess {
  bool operator()(const AxisKey& a, const AxisKey& b) const {
    if (a.shift != b.shift) return IVecLess{}(a.shift, b.shift);
    return a.axis < b.axis;
  }
};

ScalarMatrix dense_rows(const Vectorized& v) {
  ScalarMatrix m(v.vecs.size(), std::vector<Scalar>(v.naxes));
  for (std::size_t r = 0; r < v.vecs.size(); ++r)
    for (const auto& [axis, s] : v.vecs[r]) m[r][axis] = s;
  return m;
}

std::vector<ShiftOp> all_words(const std::vector<ShiftOp>& gens, std::size_t n, const ShiftOp& one) {
  std::vector<ShiftOp> level{one};
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<ShiftOp> next;
    for (const auto& w : level)
      for (const auto& g : gens) next.push_back(g * w);
    level = std::move(next);
  }
  return level;
}

ShiftOp laurent_x(const ParamFieldPtr& f, int32_t k) {
  return ShiftOp::single(f, ModuleSpec::laurent_all(1), IVec{k}, ExpPoly::constant(f, 1, Scalar(1)));
}

// psi = x^{-j} op x^k in D, or nullopt.
std::optional<std::pair<Coordinates, ShiftOp>> cofactor_in_d(const ShiftOp& op, int64_t j, int64_t k,
                                                             const AlgebraPreset& p) {
  const ModuleSpec lm = ModuleSpec::laurent_all(1);
  ShiftOp psi = laurent_x(p.params, static_cast<int32_t>(-j)) * op.on_module(lm) * laurent_x(p.params, static_cast<int32_t>(k));
  if (domain_guard(psi, ModuleSpec::polynomial(1))) return std::nullopt;
  ShiftOp on_p = psi.on_module(p.module);
  auto c = coordinates_in_basis(on_p, BasisId::D_basis, p);
  if (!c) return std::nullopt;
  if (k >= 0 && !(p.generator("x").pow(j) * expand(*c, p) == op * p.generator("x").pow(k)))
    throw InvariantBreach("cofactor does not recompose");
  return std::make_pair(std::move(*c), on_p);
}

}  // namespace

std::vector<BasisElement> special_monomials(const std::string& a, const std::string& d, int64_t n) {
  std::vector<BasisElement> out;
  auto push = [&](Letters l) {
    BasisElement b;
    for (auto& [g, k] : l)
      if (k) b.letters.emplace_back(g, k);
    out.push_back(std::move(b));
  };
  for (int64_t j = 0; j <= n; ++j) push({{a, j}, {d, n - j}});
  for (int64_t j = 0; j + 2 <= n; ++j)
    for (int64_t k = 1; j + 1 + k <= n; ++k) push({{a, j}, {d, 1}, {a, k}, {d, n - j - 1 - k}});
  return out;
}

std::vector<BasisElement> enumerate_basis(BasisId basis, const BasisConstraint& c, std::size_t n) {
  if (!c.degree && !c.max_degree) throw PreconditionViolated("enumerate_basis needs a degree bound");
  int64_t lo = c.degree.value_or(0), hi = c.degree ? *c.degree : *c.max_degree;
  if (c.degree && c.max_degree) hi = std::min(hi, *c.max_degree);
  std::vector<BasisElement> out;
  for (int64_t d = lo; d <= hi; ++d) {
    std::vector<BasisElement> level;
    switch (basis) {
      case BasisId::G_basis: level = g_elements(d); break;
      case BasisId::W_basis: level = w_elements(d); break;
      case BasisId::D_basis:
        level = g_elements(d);
        for (auto& b : d_extra_elements(d)) level.push_back(std::move(b));
        break;
      case BasisId::PBW_weyl:
        for (const auto& ab : compositions(2 * n, d)) {
          std::vector<int64_t> a(ab.begin(), ab.begin() + n), b(ab.begin() + n, ab.end());
          level.push_back(pbw_element(a, b));
        }
        break;
      case BasisId::SkewGroup_basis:
        for (const auto& ij : compositions(2 * n, d)) {
          std::vector<int64_t> I(ij.begin(), ij.begin() + n), J(ij.begin() + n, ij.end());
          for (const auto& g : gamma_box(n, c.gamma_bound)) level.push_back(skew_element(I, J, g));
        }
        break;
    }
    for (auto& b : level) {
      if (c.shift) {
        if (basis == BasisId::D_basis || basis == BasisId::G_basis || basis == BasisId::W_basis) {
          if (c.shift->size() != 1 || d_shift(b) != (*c.shift)[0]) continue;
        } else {
          bool ok = c.shift->size() == n;
          for (std::size_t i = 0; ok && i < n; ++i) {
            std::string up = basis == BasisId::PBW_weyl ? idx("v", i) : idx("r", i);
            std::string down = basis == BasisId::PBW_weyl ? idx("u", i) : idx("del", i);
            ok = b.count(up) - b.count(down) == (*c.shift)[i];
          }
          if (!ok) continue;
        }
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

std::optional<Coordinates> coordinates_in_basis(const ShiftOp& op, BasisId basis, const AlgebraPreset& preset,
                                                const CoordinateOptions& opts) {
  check_basis_preset(basis, preset);
  std::mt19937_64 rng(opts.shuffle_seed);
  Coordinates out;
  for (const auto& term : op.terms()) {
    bool solved = false;
    for (int64_t widen = 0; widen <= 2 && !solved; ++widen) {
      std::vector<BasisElement> cands;
      switch (basis) {
        case BasisId::D_basis:
        case BasisId::G_basis:
        case BasisId::W_basis: cands = d_family_candidates(basis, term.shift[0], term.coeff, widen); break;
        case BasisId::PBW_weyl: cands = pbw_candidates(term.shift, term.coeff, widen); break;
        case BasisId::SkewGroup_basis: cands = skew_candidates(term.shift, term.coeff, widen, preset); break;
      }
      if (opts.shuffle_seed) std::shuffle(cands.begin(), cands.end(), rng);
      std::vector<ExpPoly> coeffs;
      for (const auto& b : cands) {
        ShiftOp e = evaluate(b, preset);
        const ExpPoly* k = e.coeff_at(term.shift);
        if (e.terms().size() != 1 || !k) throw InvariantBreach("basis element " + b.descriptor() + " is not a single shift");
        coeffs.push_back(*k);
      }
      auto x = coordinates(term.coeff, coeffs);
      if (!x) continue;
      solved = true;
      for (std::size_t i = 0; i < cands.size(); ++i)
        if (!(*x)[i].is_zero()) out.push_back({cands[i], (*x)[i]});
    }
    if (!solved) return std::nullopt;
  }
  std::sort(out.begin(), out.end(),
            [](const CoordinateTerm& a, const CoordinateTerm& b) { return a.element.descriptor() < b.element.descriptor(); });
  return out;
}

std::optional<Coordinates> membership_in_left_ideal_x(const ShiftOp& op, const AlgebraPreset& preset) {
  if (!is_one_variable(preset)) throw PreconditionViolated("membership test needs a one-variable preset");
  auto r = cofactor_in_d(op, 0, -1, preset);
  if (!r) return std::nullopt;
  if (!(r->second * preset.generator("x") == op)) throw InvariantBreach("left-ideal cofactor does not recompose");
  return std::move(r->first);
}

Coordinates claim_cofactor(int64_t j, const AlgebraPreset& preset) {
  if (j < 1) throw PreconditionViolated("claim_cofactor needs j >= 1");
  Scalar q = preset.params->param(0);
  ShiftOp d = preset.generator("d"), d1 = preset.generator("d1");
  ShiftOp target = d.pow(j).scaled(q_number(j, q)) - (d1 * d.pow(j - 1)).scaled(Scalar(long(j)) * q.pow(j));
  auto c = membership_in_left_ideal_x(target, preset);
  if (!c) throw InvariantBreach("claim cofactor not found for j = " + std::to_string(j));
  if (!(expand(*c, preset) * preset.generator("x") == target)) throw InvariantBreach("claim cofactor does not recompose");
  return *c;
}

OreWitness ore_witness(const ShiftOp& g, int64_t j, int64_t kmax, const AlgebraPreset& preset) {
  if (!is_one_variable(preset)) throw PreconditionViolated("ore_witness needs a one-variable preset");
  if (j < 0) throw PreconditionViolated("ore_witness needs j >= 0");
  for (int64_t k = 0; k <= kmax; ++k)
    if (auto r = cofactor_in_d(g, j, k, preset)) return {k, std::move(r->first)};
  throw NoWitnessWithinBound("no witness with k <= " + std::to_string(kmax));
}

Vectorized vectorize(const std::vector<ShiftOp>& ops) {
  std::map<AxisKey, std::size_t, AxisKeyLess> ids;
  Vectorized v;
  for (const auto& op : ops) {
    SparseVec sv;
    for (const auto& t : op.terms())
      for (auto& [axis, s] : flatten(t.coeff)) {
        auto [it, inserted] = ids.try_emplace(AxisKey{t.shift, axis}, ids.size());
        sv.emplace_back(it->second, std::move(s));
      }
    v.vecs.push_back(std::move(sv));
  }
  v.naxes = ids.size();
  return v;
}

std::size_t span_dimension(const std::vector<ShiftOp>& ops) {
  if (ops.empty()) return 0;
  Vectorized v = vectorize(ops);
  return rank_of_family(v.vecs, v.naxes, ops.front().params()->size());
}

DimResult graded_dimension(const std::vector<ShiftOp>& gens, std::size_t n, DimMethod method) {
  if (gens.empty()) throw PreconditionViolated("graded_dimension needs generators");
  ShiftOp one = ShiftOp::identity(gens.front().params(), gens.front().module());
  if (method == DimMethod::Auto) method = n <= 4 ? DimMethod::Exact : DimMethod::DualPrime;
  if (method == DimMethod::Exact) {
    Vectorized v = vectorize(all_words(gens, n, one));
    return {rank_exact(dense_rows(v)), DimMethod::Exact};
  }
  std::size_t nparams = one.params()->size();
  std::vector<ShiftOp> basis{one};
  std::size_t rank = 1;
  for (std::size_t t = 1; t <= n; ++t) {
    std::vector<ShiftOp> span;
    for (const auto& b : basis)
      for (const auto& g : gens) span.push_back(g * b);
    Vectorized v = vectorize(span);
    rank = rank_of_family(v.vecs, v.naxes, nparams);
    std::vector<RankProfile> agree;
    for (unsigned attempt = 0; attempt < 8 && agree.size() < 2; ++attempt) {
      auto point = specialization_point(nparams, attempt);
      auto m = reduce_columns(v.vecs, v.naxes, point);
      if (!m) continue;
      RankProfile rp = rank_profile_mod(std::move(*m), kernels::kPrime);
      if (rp.rank == rank) agree.push_back(std::move(rp));
    }
    if (agree.size() < 2) throw InvariantBreach("two prime specializations did not confirm the exact rank");
    std::vector<ShiftOp> next;
    for (auto c : agree[0].pivot_cols) next.push_back(span[c]);
    basis = std::move(next);
  }
  return {rank, DimMethod::DualPrime};
}

DimResult graded_dimension(const AlgebraPreset& preset, const std::vector<std::string>& names, std::size_t n,
                           DimMethod method) {
  std::vector<ShiftOp> gens;
  for (const auto& g : names) gens.push_back(preset.generator(g));
  return graded_dimension(gens, n, method);
}

std::vector<std::size_t> hilbert_coefficients(std::size_t N) {
  std::vector<std::size_t> inv(N + 1), out(N + 1, 0);
  for (std::size_t k = 0; k <= N; ++k) inv[k] = (k + 2) * (k + 1) / 2;
  for (std::size_t k = 0; k <= N; ++k) {
    out[k] += inv[k];
    if (k >= 2) out[k] += inv[k - 2];
  }
  return out;
}

}  // namespace qdop
