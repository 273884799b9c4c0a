#include <algorithm>

#include "qdop/error.hpp"
#include "qdop/linalg.hpp"
#include "qdop/presets.hpp"

namespace qdop {

namespace {

struct NameEntry {
  PresetId id;
  std::string_view name;
};

constexpr NameEntry kNames[] = {
    {PresetId::D_poly_1, "D_poly_1"},       {PresetId::D_laurent_1, "D_laurent_1"},
    {PresetId::D_poly_n, "D_poly_n"},       {PresetId::Delta_n, "Delta_n"},
    {PresetId::SkewGroup_n, "SkewGroup_n"}, {PresetId::WeylLambda_n, "WeylLambda_n"},
    {PresetId::QuantumPlane, "QuantumPlane"}, {PresetId::Torus_A1, "Torus_A1"},
    {PresetId::Torus_A2, "Torus_A2"},       {PresetId::Torus_A3, "Torus_A3"},
    {PresetId::Exterior_n, "Exterior_n"},
};

Exponents unit(std::size_t s, std::size_t t, int64_t k = 1) {
  Exponents e(s, 0);
  e.at(t) = k;
  return e;
}

std::string pair_name(char p, std::size_t i, std::size_t j, std::size_t n) {
  std::string s(1, p);
  s += '_';
  s += std::to_string(i + 1);
  if (n > 9) s += '_';
  s += std::to_string(j + 1);
  return s;
}

std::vector<std::string> pair_names(char p, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(pair_name(p, i, j, n));
  return out;
}

// Index of the parameter for the unordered pair {i, j}, i < j.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Exponent matrix of q_ij for the natural parametrisation q_ji = q_ij^{-1}.
std::vector<std::vector<Exponents>> natural_q(std::size_t n) {
  std::size_t s = n * (n - 1) / 2;
  std::vector<std::vector<Exponents>> e(n, std::vector<Exponents>(n, Exponents(s, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      e[i][j] = unit(s, pair_index(i, j, n));
      e[j][i] = unit(s, pair_index(i, j, n), -1);
    }
  return e;
}

IVec basis_vec(std::size_t v, std::size_t i, int32_t k = 1) {
  IVec d(v, 0);
  d[i] = k;
  return d;
}

// Operators determined by the commutation data x_i x_j = q_ij x_j x_i of an
// ordered-monomial module.
struct QSpace {
  ParamFieldPtr f;
  ModuleSpec module;
  std::vector<std::vector<Exponents>> q;

  std::size_t v() const { return module.v; }

  ExpPoly product_character(std::size_t i, bool over_smaller, bool transpose) const {
    Character c(f->size(), v());
    for (std::size_t j = 0; j < v(); ++j) {
      if (j == i || (over_smaller ? j > i : j < i)) continue;
      const Exponents& e = transpose ? q[j][i] : q[i][j];
      for (std::size_t t = 0; t < f->size(); ++t) c.set(t, j, static_cast<int32_t>(e[t]));
    }
    return ExpPoly::character(f, v(), c);
  }
  // x_i * x^m
  ShiftOp lambda(std::size_t i) const {
    return ShiftOp::single(f, module, basis_vec(v(), i), product_character(i, true, false));
  }
  // x^m * x_i
  ShiftOp rho(std::size_t i) const {
    return ShiftOp::single(f, module, basis_vec(v(), i), product_character(i, false, true));
  }
  // Right sigma_{e_i}-derivation with delta_i(x_j) = [i = j].
  ShiftOp delta(std::size_t i) const {
    ExpPoly c = ExpPoly::variable(f, v(), i) * product_character(i, false, false);
    return ShiftOp::single(f, module, basis_vec(v(), i, -1), c);
  }
};

Word word(Scalar c, std::vector<std::string> letters) { return Word{std::move(c), std::move(letters)}; }

Relation relation(std::string label, std::vector<Word> terms) {
  return Relation{std::move(label), std::move(terms)};
}

std::string idx(const char* stem, std::size_t i) { return stem + std::to_string(i + 1); }

void add_gen(AlgebraPreset& p, const std::string& name, ShiftOp op) {
  p.generator_names.push_back(name);
  p.generators.insert_or_assign(name, std::move(op));
}

void add_ext(AlgebraPreset& p, const std::string& name, ExtOperator op) {
  p.generator_names.push_back(name);
  p.ext_generators.insert_or_assign(name, std::move(op));
}

ParamFieldPtr make_field(const std::vector<std::string>& names, const std::map<std::string, Rational>& pins) {
  auto f = std::make_shared<ParamField>(names);
  for (const auto& [k, v] : pins) {
    auto i = f->index_of(k);
    if (!i) throw PreconditionViolated("unknown parameter '" + k + "'");
    f->pin(*i, v);
  }
  check_generic_pins(*f);
  return f;
}

void add_sigmas(AlgebraPreset& p) {
  for (std::size_t i = 0; i < p.module.v; ++i) {
    IVec e = basis_vec(p.module.v, i), me = basis_vec(p.module.v, i, -1);
    add_gen(p, idx("s", i), p.sigma({e.data(), e.size()}));
    add_gen(p, idx("sm", i), p.sigma({me.data(), me.size()}));
  }
}

// --- one variable ----------------------------------------------------------

void build_one_variable(AlgebraPreset& p, bool laurent, const PresetOptions& o) {
  p.n = 1;
  p.params = make_field({"q"}, o.pins);
  p.module = laurent ? ModuleSpec::laurent_all(1) : ModuleSpec::polynomial(1);
  p.bichar = Bicharacter(1, 1);
  p.bichar.set(0, 0, {1});
  p.var_names = {"x"};
  const auto& f = p.params;
  auto chr = [&](int32_t k) {
    Character c(1, 1);
    c.set(0, 0, k);
    return ExpPoly::character(f, 1, c);
  };
  add_gen(p, "x", ShiftOp::single(f, p.module, IVec{1}, ExpPoly::constant(f, 1, Scalar(1))));
  add_gen(p, "d", p.q_derivative(0, 0));
  add_gen(p, "d1", p.q_derivative(0, 1));
  add_gen(p, "dm1", p.q_derivative(0, -1));
  add_gen(p, "s1", ShiftOp::single(f, p.module, IVec{0}, chr(1)));
  add_gen(p, "sm1", ShiftOp::single(f, p.module, IVec{0}, chr(-1)));
  if (laurent) {
    add_gen(p, "xinv", ShiftOp::single(f, p.module, IVec{-1}, ExpPoly::constant(f, 1, Scalar(1))));
    add_gen(p, "w1", ShiftOp::single(f, p.module, IVec{-1}, chr(1)));
    add_gen(p, "wm1", ShiftOp::single(f, p.module, IVec{-1}, chr(-1)));
  }
  Scalar q = f->param(0);
  const char* da[] = {"dm1", "d", "d1"};
  for (int a = -1; a <= 1; ++a)
    p.relations.push_back(relation("d_a x - q^a x d_a = 1 (a = " + std::to_string(a) + ")",
                                   {word(1, {da[a + 1], "x"}), word(-f->power(0, a), {"x", da[a + 1]}),
                                    word(-1, {})}));
  const std::pair<int, int> pairs[] = {{1, 0}, {1, -1}, {0, -1}};
  for (auto [a, b] : pairs)
    p.relations.push_back(relation(
        "d_a x d_b = d_b x d_a (a = " + std::to_string(a) + ", b = " + std::to_string(b) + ")",
        {word(1, {da[a + 1], "x", da[b + 1]}), word(-1, {da[b + 1], "x", da[a + 1]})}));
  p.relations.push_back(relation("dm1 d1 = q d1 dm1", {word(1, {"dm1", "d1"}), word(-q, {"d1", "dm1"})}));
  if (laurent) {
    p.relations.push_back(relation("x xinv = 1", {word(1, {"x", "xinv"}), word(-1, {})}));
    p.relations.push_back(relation("xinv x = 1", {word(1, {"xinv", "x"}), word(-1, {})}));
  }
}

// --- several variables -----------------------------------------------------

ModuleSpec mixed_module(std::size_t n, std::size_t laurent_count) {
  if (laurent_count > n) throw UnsupportedArity("more Laurent variables than variables");
  ModuleSpec m = ModuleSpec::polynomial(n);
  for (std::size_t i = 0; i < laurent_count; ++i) m.laurent[i] = true;
  return m;
}

void build_commutative(AlgebraPreset& p, const PresetOptions& o) {
  std::size_t n = p.n;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q_" + std::to_string(i + 1));
  p.params = make_field(names, o.pins);
  p.module = mixed_module(n, o.laurent_count.value_or(0));
  p.bichar = Bicharacter(n, n);
  for (std::size_t i = 0; i < n; ++i) p.bichar.set(i, i, unit(n, i));
  for (std::size_t i = 0; i < n; ++i) p.var_names.push_back(idx("x", i));
  QSpace qs{p.params, p.module, std::vector<std::vector<Exponents>>(n, std::vector<Exponents>(n, Exponents(n, 0)))};
  for (std::size_t i = 0; i < n; ++i) {
    add_gen(p, idx("x", i), qs.lambda(i));
    if (p.module.laurent[i]) add_gen(p, idx("xinv", i), *qs.lambda(i).inverse());
    add_gen(p, idx("d", i), p.q_derivative(i, 0));
    add_gen(p, idx("dq", i), p.q_derivative(i, 1));
    add_gen(p, idx("dqm", i), p.q_derivative(i, -1));
  }
  add_sigmas(p);
}

void build_nspace(AlgebraPreset& p, const PresetOptions& o, bool skew) {
  std::size_t n = p.n;
  p.params = make_field(pair_names('q', n), o.pins);
  p.module = mixed_module(n, o.laurent_count.value_or(0));
  auto q = natural_q(n);
  std::size_t s = p.params->size();
  p.bichar = Bicharacter(n, s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.bichar.set(i, j, q[i][j]);
  for (std::size_t i = 0; i < n; ++i) p.var_names.push_back(idx("x", i));
  QSpace qs{p.params, p.module, q};
  for (std::size_t i = 0; i < n; ++i) {
    ShiftOp l = qs.lambda(i);
    add_gen(p, idx("x", i), l);
    add_gen(p, idx("l", i), l);
    add_gen(p, idx("r", i), qs.rho(i));
    add_gen(p, idx("del", i), qs.delta(i));
    if (p.module.laurent[i]) {
      add_gen(p, idx("xinv", i), *l.inverse());
      add_gen(p, idx("rinv", i), *qs.rho(i).inverse());
    }
  }
  add_sigmas(p);
  for (std::size_t i = 0; i < n; ++i)
    add_gen(p, idx("d", i), p.generators.at(idx("sm", i)) * p.generators.at(idx("del", i)));

  auto qv = [&](std::size_t i, std::size_t j) { return p.params->laurent(q[i][j]); };
  if (!skew) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (i < j) {
          p.relations.push_back(relation(idx("r", i) + " " + idx("r", j) + " = q_ji " + idx("r", j) + " " + idx("r", i),
                                         {word(1, {idx("r", i), idx("r", j)}), word(-qv(j, i), {idx("r", j), idx("r", i)})}));
          p.relations.push_back(relation(idx("del", i) + " " + idx("del", j) + " = q_ji " + idx("del", j) + " " + idx("del", i),
                                         {word(1, {idx("del", i), idx("del", j)}), word(-qv(j, i), {idx("del", j), idx("del", i)})}));
        }
        p.relations.push_back(relation(idx("del", i) + " " + idx("r", j) + " = q_ij " + idx("r", j) + " " + idx("del", i),
                                       {word(1, {idx("del", i), idx("r", j)}), word(-qv(i, j), {idx("r", j), idx("del", i)})}));
      }
    for (std::size_t i = 0; i < n; ++i)
      p.relations.push_back(relation(idx("del", i) + " " + idx("r", i) + " - " + idx("r", i) + " " + idx("del", i) + " = 1",
                                     {word(1, {idx("del", i), idx("r", i)}), word(-1, {idx("r", i), idx("del", i)}), word(-1, {})}));
    return;
  }
  // Skew group algebra presented on rho_i, partial_i and sigma_{+-e_k}.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string ri = idx("r", i), rj = idx("r", j), di = idx("d", i), dj = idx("d", j);
      if (i < j) {
        p.relations.push_back(relation(ri + " " + rj + " = q_ji " + rj + " " + ri,
                                       {word(1, {ri, rj}), word(-qv(j, i), {rj, ri})}));
        p.relations.push_back(relation(di + " " + dj + " = q_ij " + dj + " " + di,
                                       {word(1, {di, dj}), word(-qv(i, j), {dj, di})}));
      }
      std::vector<Word> comm = {word(1, {di, rj}), word(-1, {rj, di})};
      if (i == j) comm.push_back(word(-1, {idx("sm", i)}));
      p.relations.push_back(relation("[" + di + ", " + rj + "] = " + (i == j ? idx("sm", i) : std::string("0")), comm));
    }
  for (std::size_t k = 0; k < n; ++k) {
    for (int sgn : {1, -1}) {
      std::string sk = idx(sgn > 0 ? "s" : "sm", k);
      for (std::size_t i = 0; i < n; ++i) {
        IVec ei = basis_vec(n, i), mei = basis_vec(n, i, -1);
        IVec a = basis_vec(n, k, sgn);
        Scalar br = p.bichar.value({a.data(), a.size()}, {ei.data(), ei.size()}, *p.params);
        Scalar bd = p.bichar.value({a.data(), a.size()}, {mei.data(), mei.size()}, *p.params);
        p.relations.push_back(relation(sk + " " + idx("r", i) + " = beta " + idx("r", i) + " " + sk,
                                       {word(1, {sk, idx("r", i)}), word(-br, {idx("r", i), sk})}));
        p.relations.push_back(relation(sk + " " + idx("d", i) + " = beta " + idx("d", i) + " " + sk,
                                       {word(1, {sk, idx("d", i)}), word(-bd, {idx("d", i), sk})}));
      }
    }
    p.relations.push_back(relation(idx("s", k) + " " + idx("sm", k) + " = 1",
                                   {word(1, {idx("s", k), idx("sm", k)}), word(-1, {})}));
    p.relations.push_back(relation(idx("sm", k) + " " + idx("s", k) + " = 1",
                                   {word(1, {idx("sm", k), idx("s", k)}), word(-1, {})}));
    for (std::size_t l = k + 1; l < n; ++l)
      for (const char* a : {"s", "sm"})
        for (const char* b : {"s", "sm"})
          p.relations.push_back(relation(idx(a, k) + " " + idx(b, l) + " = " + idx(b, l) + " " + idx(a, k),
                                         {word(1, {idx(a, k), idx(b, l)}), word(-1, {idx(b, l), idx(a, k)})}));
  }
}

// --- quantum plane and tori ------------------------------------------------

void build_plane(AlgebraPreset& p, bool lx, bool ly, const PresetOptions& o) {
  p.n = 2;
  p.params = make_field({"q"}, o.pins);
  p.module = ModuleSpec{2, {lx, ly}};
  p.bichar = Bicharacter(2, 1);
  p.bichar.set(0, 0, {1});
  p.bichar.set(1, 1, {1});
  p.var_names = {"x", "y"};
  // xy = q yx: q_12 = q.
  std::vector<std::vector<Exponents>> q = {{{0}, {1}}, {{-1}, {0}}};
  QSpace qs{p.params, p.module, q};
  add_gen(p, "x", qs.lambda(0));
  add_gen(p, "y", qs.lambda(1));
  add_gen(p, "rx", qs.rho(0));
  add_gen(p, "ry", qs.rho(1));
  if (lx) {
    add_gen(p, "xinv", *qs.lambda(0).inverse());
    add_gen(p, "rxinv", *qs.rho(0).inverse());
  }
  if (ly) {
    add_gen(p, "yinv", *qs.lambda(1).inverse());
    add_gen(p, "ryinv", *qs.rho(1).inverse());
  }
  const char* dx[] = {"dxm1", "dx", "dx1"};
  const char* dy[] = {"dym1", "dy", "dy1"};
  for (int a = -1; a <= 1; ++a) {
    add_gen(p, dx[a + 1], p.q_derivative(0, a));
    add_gen(p, dy[a + 1], p.q_derivative(1, a));
  }
  IVec e1{1, 0}, e2{0, 1}, m1{-1, 0}, m2{0, -1};
  add_gen(p, "sx", p.sigma({e1.data(), 2}));
  add_gen(p, "sxinv", p.sigma({m1.data(), 2}));
  add_gen(p, "sy", p.sigma({e2.data(), 2}));
  add_gen(p, "syinv", p.sigma({m2.data(), 2}));
}

// --- quantized Weyl algebra ------------------------------------------------

void add_weyl_relations(AlgebraPreset& p) {
  std::size_t n = p.n;
  const auto& L = p.lambda;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string ui = idx("u", i), uj = idx("u", j), vi = idx("v", i), vj = idx("v", j);
      if (i < j) {
        p.relations.push_back(relation(vj + " " + vi + " = lambda_ji " + vi + " " + vj,
                                       {word(1, {vj, vi}), word(-L[j][i], {vi, vj})}));
        p.relations.push_back(relation(uj + " " + ui + " = lambda_ji " + ui + " " + uj,
                                       {word(1, {uj, ui}), word(-L[j][i], {ui, uj})}));
      }
      if (i != j)
        p.relations.push_back(relation(uj + " " + vi + " = lambda_ij " + vi + " " + uj,
                                       {word(1, {uj, vi}), word(-L[i][j], {vi, uj})}));
    }
  for (std::size_t i = 0; i < n; ++i) {
    std::string ui = idx("u", i), vi = idx("v", i);
    p.relations.push_back(relation(ui + " " + vi + " - " + vi + " " + ui + " = 1",
                                   {word(1, {ui, vi}), word(-1, {vi, ui}), word(-1, {})}));
  }
}

// --- exterior algebra ------------------------------------------------------

void build_exterior(AlgebraPreset& p, const PresetOptions& o) {
  std::size_t n = p.n;
  p.params = make_field(pair_names('p', n), o.pins);
  ExteriorParams e{p.params, n, {}};
  e.p.assign(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) {
    e.p[i][i] = Scalar(-1);
    for (std::size_t j = i + 1; j < n; ++j) {
      e.p[i][j] = p.params->param(pair_index(i, j, n));
      e.p[j][i] = e.p[i][j].inverse();
    }
  }
  p.exterior = e;
  p.module = ModuleSpec::polynomial(n);
  std::size_t s = p.params->size();
  p.bichar = Bicharacter(n, s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      p.bichar.set(i, j, i < j ? unit(s, pair_index(i, j, n)) : unit(s, pair_index(j, i, n), -1), -1);
    }
  for (std::size_t i = 0; i < n; ++i) p.var_names.push_back(idx("xi", i));
  for (std::size_t i = 0; i < n; ++i) add_ext(p, idx("xi", i), exterior_left_mult(e, 1u << i));
  for (std::size_t i = 0; i < n; ++i) add_ext(p, idx("del", i), exterior_delta(e, i + 1));
  for (std::size_t i = 0; i < n; ++i) {
    IVec g = basis_vec(n, i), mg = basis_vec(n, i, -1);
    add_ext(p, idx("s", i), exterior_sigma(e, {g.data(), n}));
    add_ext(p, idx("sm", i), exterior_sigma(e, {mg.data(), n}));
  }
  for (std::size_t i = 0; i < n; ++i) {
    p.relations.push_back(relation(idx("xi", i) + "^2 = 0", {word(1, {idx("xi", i), idx("xi", i)})}));
    for (std::size_t j = i + 1; j < n; ++j)
      p.relations.push_back(relation(idx("xi", i) + " " + idx("xi", j) + " + p_ij " + idx("xi", j) + " " + idx("xi", i) + " = 0",
                                     {word(1, {idx("xi", i), idx("xi", j)}), word(e.p[i][j], {idx("xi", j), idx("xi", i)})}));
  }
}

void check_generators(const AlgebraPreset& p) {
  for (const auto& [name, op] : p.generators)
    if (domain_guard(op)) throw InvariantBreach("generator " + name + " leaves its module");
}

std::optional<std::vector<int32_t>> parse_sigma_name(std::string_view name) {
  if (name.size() < 4 || name.substr(0, 3) != "sg[" || name.back() != ']') return std::nullopt;
  std::vector<int32_t> out;
  std::string_view body = name.substr(3, name.size() - 4);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string_view piece = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (piece.empty()) return std::nullopt;
    std::size_t k = (piece[0] == '-' || piece[0] == '+') ? 1 : 0;
    if (k == piece.size()) return std::nullopt;
    for (std::size_t c = k; c < piece.size(); ++c)
      if (piece[c] < '0' || piece[c] > '9') return std::nullopt;
    out.push_back(static_cast<int32_t>(std::stol(std::string(piece))));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view preset_name(PresetId id) {
  for (const auto& e : kNames)
    if (e.id == id) return e.name;
  return "?";
}

std::optional<PresetId> preset_from_name(std::string_view name) {
  for (const auto& e : kNames)
    if (e.name == name) return e.id;
  return std::nullopt;
}

const std::vector<PresetId>& all_presets() {
  static const std::vector<PresetId> ids = [] {
    std::vector<PresetId> v;
    for (const auto& e : kNames) v.push_back(e.id);
    return v;
  }();
  return ids;
}

// --- Bicharacter -----------------------------------------------------------

Bicharacter::Bicharacter(std::size_t rank, std::size_t params)
    : n_(rank), s_(params), e_(rank * rank, Exponents(params, 0)), sign_(rank * rank, 1) {}

void Bicharacter::set(std::size_t i, std::size_t j, Exponents exps, int sign) {
  if (exps.size() != s_) throw ContextMismatch("bicharacter exponent length");
  e_.at(i * n_ + j) = std::move(exps);
  sign_.at(i * n_ + j) = sign;
}

Exponents Bicharacter::exponents(std::span<const int32_t> a, std::span<const int32_t> b) const {
  if (a.size() != n_ || b.size() != n_) throw ContextMismatch("bicharacter argument length");
  Exponents out(s_, 0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      int64_t w = int64_t(a[i]) * b[j];
      if (w == 0) continue;
      const Exponents& e = e_[i * n_ + j];
      for (std::size_t t = 0; t < s_; ++t) out[t] += w * e[t];
    }
  return out;
}

int Bicharacter::sign(std::span<const int32_t> a, std::span<const int32_t> b) const {
  int64_t odd = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (sign_[i * n_ + j] < 0) odd += int64_t(a[i]) * b[j];
  return (odd % 2 == 0) ? 1 : -1;
}

Scalar Bicharacter::value(std::span<const int32_t> a, std::span<const int32_t> b, const ParamField& f) const {
  Scalar v = f.laurent(exponents(a, b));
  return sign(a, b) < 0 ? -v : v;
}

Character Bicharacter::weight(std::span<const int32_t> a) const {
  if (a.size() != n_) throw ContextMismatch("bicharacter argument length");
  Character c(s_, n_);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t t = 0; t < s_; ++t) {
      int64_t x = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] != 0 && sign_[i * n_ + j] < 0) throw PreconditionViolated("signed bicharacter has no weight character");
        x += int64_t(a[i]) * e_[i * n_ + j][t];
      }
      c.set(t, j, static_cast<int32_t>(x));
    }
  }
  return c;
}

// --- ExtOperator -------------------------------------------------------------

ExtOperator::ExtOperator(ParamFieldPtr params, std::size_t n) : params_(std::move(params)), n_(n) {
  if (n == 0 || n > 10) throw UnsupportedArity("exterior algebra needs 1 <= n <= 10");
  a_.assign(dim() * dim(), Scalar());
}

ExtOperator ExtOperator::identity(ParamFieldPtr params, std::size_t n) {
  ExtOperator r(std::move(params), n);
  for (std::size_t i = 0; i < r.dim(); ++i) r.set(i, i, Scalar(1));
  return r;
}

bool ExtOperator::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_zero(); });
}

void ExtOperator::check_context(const ExtOperator& o) const {
  if (n_ != o.n_ || !same_field(params_, o.params_)) throw ContextMismatch("exterior operators over different algebras");
}

ExtOperator ExtOperator::operator-() const {
  ExtOperator r = *this;
  for (auto& x : r.a_) x = -x;
  return r;
}

ExtOperator& ExtOperator::operator+=(const ExtOperator& o) {
  check_context(o);
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (!o.a_[i].is_zero()) a_[i] += o.a_[i];
  return *this;
}

ExtOperator& ExtOperator::operator-=(const ExtOperator& o) { return *this += -o; }

ExtOperator operator*(const ExtOperator& a, const ExtOperator& b) {
  a.check_context(b);
  ExtOperator r(a.params_, a.n_);
  std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Scalar& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j) {
        const Scalar& y = b.at(k, j);
        if (!y.is_zero()) r.a_[i * d + j] += x * y;
      }
    }
  return r;
}

ExtOperator ExtOperator::scaled(const Scalar& c) const {
  ExtOperator r = *this;
  for (auto& x : r.a_)
    if (!x.is_zero()) x *= c;
  return r;
}

ExtOperator ExtOperator::pow(int64_t k) const {
  if (k < 0) throw NegativePowerOfNonInvertible("negative power of an exterior operator");
  ExtOperator r = identity(params_, n_);
  for (int64_t i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::vector<Scalar> ExtOperator::apply(const std::vector<Scalar>& v) const {
  if (v.size() != dim()) throw ContextMismatch("vector length differs from exterior dimension");
  std::vector<Scalar> out(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      if (!at(i, j).is_zero() && !v[j].is_zero()) out[i] += at(i, j) * v[j];
  return out;
}

bool operator==(const ExtOperator& a, const ExtOperator& b) {
  a.check_context(b);
  return a.a_ == b.a_;
}

// --- exterior constructions ----------------------------------------------------

ExteriorParams default_exterior_params(std::size_t n) {
  AlgebraPreset p = build_preset(PresetId::Exterior_n, PresetOptions{n, {}, {}, {}, {}});
  return *p.exterior;
}

void validate_exterior_params(const ExteriorParams& e) {
  if (e.n == 0 || e.n > 10) throw UnsupportedArity("exterior algebra needs 1 <= n <= 10");
  if (e.p.size() != e.n) throw InvalidP("p must be n x n");
  for (const auto& row : e.p)
    if (row.size() != e.n) throw InvalidP("p must be n x n");
  for (std::size_t i = 0; i < e.n; ++i) {
    if (!(e.p[i][i] == Scalar(-1))) throw InvalidP("p_ii must be -1");
    for (std::size_t j = 0; j < e.n; ++j)
      if (i != j && !(e.p[i][j] * e.p[j][i] == Scalar(1))) throw InvalidP("p_ji must equal 1/p_ij");
  }
}

Scalar exterior_product_sign(const ExteriorParams& e, unsigned s, unsigned t) {
  if (s & t) return Scalar();
  Scalar c(1);
  for (std::size_t a = 0; a < e.n; ++a) {
    if (!(s >> a & 1u)) continue;
    for (std::size_t b = 0; b < a; ++b)
      if (t >> b & 1u) c *= -e.p[a][b];
  }
  return c;
}

ExtOperator exterior_left_mult(const ExteriorParams& e, unsigned mask) {
  ExtOperator r(e.params, e.n);
  for (unsigned t = 0; t < r.dim(); ++t) {
    Scalar c = exterior_product_sign(e, mask, t);
    if (!c.is_zero()) r.set(mask | t, t, c);
  }
  return r;
}

ExtOperator exterior_sigma(const ExteriorParams& e, std::span<const int32_t> gamma) {
  if (gamma.size() != e.n) throw ContextMismatch("sigma index length differs from n");
  ExtOperator r(e.params, e.n);
  for (unsigned t = 0; t < r.dim(); ++t) {
    Scalar c(1);
    for (std::size_t i = 0; i < e.n; ++i) {
      if (gamma[i] == 0) continue;
      for (std::size_t j = 0; j < e.n; ++j)
        if (t >> j & 1u) c *= (-e.p[i][j]).pow(gamma[i]);
    }
    r.set(t, t, c);
  }
  return r;
}

ExtOperator exterior_delta(const ExteriorParams& e, std::size_t i) {
  validate_exterior_params(e);
  if (i == 0 || i > e.n) throw UnsupportedArity("derivation index out of range");
  std::size_t k = i - 1;
  ExtOperator r(e.params, e.n);
  for (unsigned t = 0; t < r.dim(); ++t) {
    if (!(t >> k & 1u)) continue;
    Scalar c(1);
    for (std::size_t s = 0; s < k; ++s)
      if (t >> s & 1u) c *= (-e.p[k][s]).inverse();
    r.set(t & ~(1u << k), t, c);
  }
  return r;
}

std::string exterior_basis_name(unsigned mask) {
  if (mask == 0) return "1";
  std::string s;
  for (unsigned i = 0; i < 32; ++i)
    if (mask >> i & 1u) {
      if (!s.empty()) s += '*';
      s += "xi" + std::to_string(i + 1);
    }
  return s;
}

// --- AlgebraPreset -----------------------------------------------------------

bool AlgebraPreset::has(std::string_view name) const {
  std::string key(name);
  if (generators.count(key) || ext_generators.count(key)) return true;
  auto g = parse_sigma_name(name);
  return g && g->size() == module.v && (is_exterior() || !generators.empty());
}

ShiftOp AlgebraPreset::generator(std::string_view name) const {
  if (auto it = generators.find(std::string(name)); it != generators.end()) return it->second;
  if (!is_exterior())
    if (auto g = parse_sigma_name(name); g && g->size() == module.v && !generators.empty())
      return sigma(*g);
  throw UndefinedGenerator("generator '" + std::string(name) + "' is not defined in " +
                           std::string(preset_name(id)));
}

ExtOperator AlgebraPreset::ext_generator(std::string_view name) const {
  if (auto it = ext_generators.find(std::string(name)); it != ext_generators.end()) return it->second;
  if (is_exterior())
    if (auto g = parse_sigma_name(name); g && g->size() == n) return ext_sigma(*g);
  throw UndefinedGenerator("generator '" + std::string(name) + "' is not defined in " +
                           std::string(preset_name(id)));
}

ShiftOp AlgebraPreset::sigma(std::span<const int32_t> gamma) const {
  if (gamma.size() != module.v) throw ContextMismatch("sigma index length differs from the module");
  return ShiftOp::single(params, module, IVec(module.v, 0),
                         ExpPoly::character(params, module.v, bichar.weight(gamma)));
}

ExtOperator AlgebraPreset::ext_sigma(std::span<const int32_t> gamma) const {
  if (!exterior) throw UndefinedGenerator("not an exterior preset");
  return exterior_sigma(*exterior, gamma);
}

ShiftOp AlgebraPreset::q_derivative(std::size_t i, int64_t k) const {
  std::size_t v = module.v;
  Exponents base(params->size(), 0);
  const Exponents& eii = bichar.exponents(i, i);
  bool trivial = true;
  for (std::size_t t = 0; t < base.size(); ++t) {
    base[t] = k * eii[t];
    trivial = trivial && base[t] == 0;
  }
  ExpPoly c;
  if (trivial) {
    c = ExpPoly::variable(params, v, i);
  } else {
    Character chr(params->size(), v);
    for (std::size_t t = 0; t < base.size(); ++t) chr.set(t, i, static_cast<int32_t>(base[t]));
    Scalar inv = (params->laurent(base) - Scalar(1)).inverse();
    c = ExpPoly::character(params, v, chr, inv) - ExpPoly::constant(params, v, inv);
  }
  return ShiftOp::single(params, module, basis_vec(v, i, -1), std::move(c));
}

QPolynomial AlgebraPreset::monomial(IVec exps, const Scalar& c) const {
  return QPolynomial::monomial(params, module, std::move(exps), c);
}

std::vector<std::string> preset_param_names(PresetId id, std::size_t n) {
  switch (id) {
    case PresetId::D_poly_1:
    case PresetId::D_laurent_1:
    case PresetId::QuantumPlane:
    case PresetId::Torus_A1:
    case PresetId::Torus_A2:
    case PresetId::Torus_A3:
      return {"q"};
    case PresetId::D_poly_n: {
      std::vector<std::string> v;
      for (std::size_t i = 0; i < n; ++i) v.push_back("q_" + std::to_string(i + 1));
      return v;
    }
    case PresetId::Delta_n:
    case PresetId::SkewGroup_n:
    case PresetId::WeylLambda_n:
      return pair_names('q', n);
    case PresetId::Exterior_n:
      return pair_names('p', n);
  }
  return {};
}

AlgebraPreset build_preset(PresetId id, const PresetOptions& opts) {
  AlgebraPreset p;
  p.id = id;
  switch (id) {
    case PresetId::D_poly_1:
    case PresetId::D_laurent_1:
      if (opts.n && *opts.n != 1) throw UnsupportedArity("one-variable preset has n = 1");
      build_one_variable(p, id == PresetId::D_laurent_1, opts);
      break;
    case PresetId::D_poly_n:
    case PresetId::Delta_n:
    case PresetId::SkewGroup_n:
      p.n = opts.n.value_or(3);
      if (p.n < 3 || p.n > 12) throw UnsupportedArity("n-space presets need 3 <= n <= 12");
      if (id == PresetId::D_poly_n)
        build_commutative(p, opts);
      else
        build_nspace(p, opts, id == PresetId::SkewGroup_n);
      break;
    case PresetId::WeylLambda_n: {
      std::size_t n = opts.n.value_or(2);
      if (n < 1 || n > 12) throw UnsupportedArity("WeylLambda_n needs 1 <= n <= 12");
      if (opts.lambda) {
        ParamFieldPtr f = opts.lambda_field.value_or(nullptr);
        if (!f) throw PreconditionViolated("a custom lambda needs its parameter field");
        return weyl_lambda(n, *opts.lambda, f);
      }
      ParamFieldPtr f = make_field(pair_names('q', n), opts.pins);
      auto q = natural_q(n);
      std::vector<std::vector<Scalar>> lam(n, std::vector<Scalar>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lam[i][j] = f->laurent(q[j][i]);
      return weyl_lambda(n, lam, f);
    }
    case PresetId::QuantumPlane:
      build_plane(p, false, false, opts);
      break;
    case PresetId::Torus_A1:
      build_plane(p, true, false, opts);
      break;
    case PresetId::Torus_A2:
      build_plane(p, false, true, opts);
      break;
    case PresetId::Torus_A3:
      build_plane(p, true, true, opts);
      break;
    case PresetId::Exterior_n:
      p.n = opts.n.value_or(2);
      if (p.n < 1 || p.n > 10) throw UnsupportedArity("Exterior_n needs 1 <= n <= 10");
      build_exterior(p, opts);
      break;
  }
  check_generators(p);
  return p;
}

AlgebraPreset weyl_lambda(std::size_t n, const std::vector<std::vector<Scalar>>& lambda, ParamFieldPtr params) {
  if (n < 1) throw UnsupportedArity("WeylLambda_n needs n >= 1");
  if (lambda.size() != n) throw InvalidLambda("lambda must be n x n");
  for (const auto& row : lambda)
    if (row.size() != n) throw InvalidLambda("lambda must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lambda[i][i] == Scalar(1))) throw InvalidLambda("lambda_ii must be 1");
    for (std::size_t j = 0; j < n; ++j) {
      if (lambda[i][j].is_zero()) throw InvalidLambda("lambda entries must be nonzero");
      if (!(lambda[i][j] * lambda[j][i] == Scalar(1))) throw InvalidLambda("lambda_ji must equal 1/lambda_ij");
    }
  }
  AlgebraPreset p;
  p.id = PresetId::WeylLambda_n;
  p.n = n;
  p.params = std::move(params);
  p.lambda = lambda;
  p.module = ModuleSpec::polynomial(n);
  for (std::size_t i = 0; i < n; ++i) p.var_names.push_back(idx("x", i));
  add_weyl_relations(p);

  // Representation theta(u_i) = delta_i, theta(v_i) = rho_i on R_n with q_ij = lambda_ji.
  std::size_t s = p.params->size();
  std::vector<std::vector<Exponents>> q(n, std::vector<Exponents>(n, Exponents(s, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto e = p.params->any_pinned() ? std::nullopt : as_laurent_monomial(lambda[j][i], s);
      if (!e) {
        for (std::size_t k = 0; k < n; ++k) {
          p.generator_names.push_back(idx("u", k));
          p.generator_names.push_back(idx("v", k));
        }
        return p;
      }
      q[i][j] = *e;
    }
  p.bichar = Bicharacter(n, s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.bichar.set(i, j, q[i][j]);
  QSpace qs{p.params, p.module, q};
  for (std::size_t i = 0; i < n; ++i) {
    add_gen(p, idx("u", i), qs.delta(i));
    add_gen(p, idx("v", i), qs.rho(i));
  }
  for (std::size_t i = 0; i < n; ++i) add_gen(p, idx("x", i), qs.lambda(i));
  check_generators(p);
  return p;
}

std::optional<Exponents> as_laurent_monomial(const Scalar& s, std::size_t nparams) {
  if (s.num().terms().size() != 1 || s.den().terms().size() != 1) return std::nullopt;
  const auto& nt = s.num().terms()[0];
  const auto& dt = s.den().terms()[0];
  if (nt.coeff != 1 || dt.coeff != 1) return std::nullopt;
  Exponents e(nparams, 0);
  for (std::size_t t = 0; t < std::max(nt.mono.size(), dt.mono.size()); ++t) {
    if (t >= nparams) return std::nullopt;
    e[t] = int64_t(nt.mono[t]) - dt.mono[t];
  }
  return e;
}

void check_generic_pins(const ParamField& f) {
  std::vector<Rational> vals;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (!f.value(t)) continue;
    const Rational& v = *f.value(t);
    if (v == 0 || v == 1 || v == -1)
      throw PreconditionViolated("parameter " + f.name(t) + " pinned to " + v.get_str() +
                                 "; parameters must be transcendental, so 0 and +-1 are refused");
    vals.push_back(v);
  }
  if (vals.empty()) return;
  // Coprime base of all numerators and denominators.
  std::vector<mpz_class> base;
  for (const auto& v : vals)
    for (mpz_class x : {mpz_class(abs(v.get_num())), mpz_class(v.get_den())})
      if (x > 1) base.push_back(x);
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    for (std::size_t a = 0; a < base.size() && !changed; ++a)
      for (std::size_t b = a + 1; b < base.size() && !changed; ++b) {
        mpz_class g = gcd(base[a], base[b]);
        if (g == 1) continue;
        mpz_class x = base[a] / g, y = base[b] / g;
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(b));
        base.erase(base.begin() + static_cast<std::ptrdiff_t>(a));
        for (const mpz_class& z : {x, y, g})
          if (z > 1) base.push_back(z);
        changed = true;
      }
  }
  auto valuation = [](mpz_class x, const mpz_class& p) {
    long k = 0;
    while (x % p == 0) {
      x /= p;
      ++k;
    }
    return k;
  };
  ScalarMatrix m(vals.size(), std::vector<Scalar>(base.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = 0; j < base.size(); ++j)
      m[i][j] = Scalar(valuation(abs(vals[i].get_num()), base[j]) - valuation(vals[i].get_den(), base[j]));
  if (rank_exact(m) < vals.size())
    throw PreconditionViolated("pinned parameter values are multiplicatively dependent");
}

std::string sigma_name(std::span<const int32_t> gamma) {
  std::string s = "sg[";
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(gamma[i]);
  }
  return s + "]";
}

}  // namespace qdop
