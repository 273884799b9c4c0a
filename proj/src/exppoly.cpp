#include <algorithm>
#include <map>

#include "qdop/error.hpp"
#include "qdop/exppoly.hpp"
#include "qdop/linalg.hpp"
#include "qdop/parse.hpp"

namespace qdop {

bool Character::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](int32_t x) { return x == 0; });
}

int32_t Character::max_abs() const {
  int32_t m = 0;
  for (int32_t x : c_) m = std::max(m, x < 0 ? -x : x);
  return m;
}

Character Character::operator+(const Character& o) const {
  if (s_ != o.s_ || v_ != o.v_) throw ContextMismatch("character shapes differ");
  Character r = *this;
  for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] += o.c_[k];
  return r;
}

Character Character::operator-() const {
  Character r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

std::vector<int64_t> Character::exponents_at(std::span<const int32_t> m) const {
  std::vector<int64_t> e(s_, 0);
  for (std::size_t t = 0; t < s_; ++t)
    for (std::size_t i = 0; i < v_ && i < m.size(); ++i) e[t] += int64_t(at(t, i)) * m[i];
  return e;
}

std::vector<int64_t> Character::exponents_at(std::span<const int64_t> m) const {
  std::vector<int64_t> e(s_, 0);
  for (std::size_t t = 0; t < s_; ++t)
    for (std::size_t i = 0; i < v_ && i < m.size(); ++i) e[t] += int64_t(at(t, i)) * m[i];
  return e;
}

std::vector<int64_t> Character::column_times(std::size_t i, int64_t value) const {
  std::vector<int64_t> e(s_, 0);
  for (std::size_t t = 0; t < s_; ++t) e[t] = int64_t(at(t, i)) * value;
  return e;
}

Character Character::without_column(std::size_t i) const {
  Character r = *this;
  for (std::size_t t = 0; t < s_; ++t) r.set(t, i, 0);
  return r;
}

std::strong_ordering operator<=>(const Character& a, const Character& b) {
  if (auto c = a.s_ <=> b.s_; c != 0) return c;
  if (auto c = a.v_ <=> b.v_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
}

std::size_t Character::hash() const {
  std::size_t h = s_ * 131 + v_;
  for (int32_t x : c_) h = h * 1000003u + static_cast<std::size_t>(x + 7);
  return h;
}

// ---------------------------------------------------------------------------

MPoly::MPoly(const Scalar& c) {
  if (!c.is_zero()) t_.push_back({Monomial(), c});
}

MPoly MPoly::variable(std::size_t i) {
  MPoly p;
  p.t_.push_back({Monomial::variable(i), Scalar(1)});
  return p;
}

MPoly MPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.mono > b.mono; });
  MPoly p;
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().mono == t.mono) {
      p.t_.back().coeff += t.coeff;
    } else {
      if (!p.t_.empty() && p.t_.back().coeff.is_zero()) p.t_.pop_back();
      p.t_.push_back(std::move(t));
    }
  }
  if (!p.t_.empty() && p.t_.back().coeff.is_zero()) p.t_.pop_back();
  return p;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (auto& t : r.t_) t.coeff = -t.coeff;
  return r;
}

namespace {

std::vector<MPoly::Term> merge(const std::vector<MPoly::Term>& a, const std::vector<MPoly::Term>& b,
                               bool subtract) {
  std::vector<MPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono > a[i].mono) {
      out.push_back({b[j].mono, subtract ? -b[j].coeff : b[j].coeff});
      ++j;
    } else {
      Scalar c = subtract ? a[i].coeff - b[j].coeff : a[i].coeff + b[j].coeff;
      if (!c.is_zero()) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MPoly& MPoly::operator+=(const MPoly& o) {
  if (o.t_.empty()) return *this;
  if (t_.empty()) return *this = o;
  t_ = merge(t_, o.t_, false);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  if (o.t_.empty()) return *this;
  t_ = merge(t_, o.t_, true);
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero()) return MPoly();
  std::vector<MPoly::Term> acc;
  acc.reserve(a.t_.size() * b.t_.size());
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) acc.push_back({x.mono * y.mono, x.coeff * y.coeff});
  if (a.t_.size() == 1 || b.t_.size() == 1) {
    MPoly r;
    r.t_ = std::move(acc);
    std::erase_if(r.t_, [](const MPoly::Term& t) { return t.coeff.is_zero(); });
    return r;
  }
  return MPoly::from_terms(std::move(acc));
}

MPoly MPoly::scaled(const Scalar& c) const {
  if (c.is_zero()) return MPoly();
  if (c.is_one()) return *this;
  MPoly r = *this;
  for (auto& t : r.t_) t.coeff = t.coeff * c;
  return r;
}

namespace {

Scalar int_power(int64_t base, int32_t e) {
  mpz_class r;
  mpz_class b(static_cast<long>(base));
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return Scalar(Rational(r));
}

}  // namespace

Scalar MPoly::eval(std::span<const int64_t> m) const {
  Scalar s;
  for (const auto& t : t_) {
    Rational f = 1;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      if (i >= m.size()) throw ContextMismatch("evaluation point too short");
      f *= int_power(m[i], t.mono[i]).constant_value();
    }
    s += t.coeff * Scalar(f);
  }
  return s;
}

MPoly MPoly::substituted(std::size_t var, int64_t value) const {
  std::vector<Term> out;
  out.reserve(t_.size());
  for (const auto& t : t_) {
    int32_t e = t.mono[var];
    if (e == 0) {
      out.push_back(t);
      continue;
    }
    Scalar f = value == 0 ? Scalar() : int_power(value, e);
    if (f.is_zero()) continue;
    out.push_back({t.mono.with(var, 0), t.coeff * f});
  }
  return from_terms(std::move(out));
}

MPoly MPoly::shifted(std::span<const int32_t> d) const {
  bool trivial = true;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0) trivial = false;
  if (trivial || is_constant()) return *this;
  std::vector<Term> out;
  for (const auto& t : t_) {
    // Expand prod_i (m_i + d_i)^{e_i} one variable at a time.
    std::vector<Term> cur{{Monomial(), t.coeff}};
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      int32_t e = t.mono[i];
      if (e == 0) continue;
      int64_t di = i < d.size() ? d[i] : 0;
      std::vector<Term> next;
      mpz_class binom = 1;
      for (int32_t k = 0; k <= e; ++k) {
        // binom(e, k) * di^(e-k) * m_i^k
        if (k > 0) binom = binom * (e - k + 1) / k;
        Rational c = Rational(binom) * int_power(di, e - k).constant_value();
        if (di == 0 && k < e) continue;
        for (const auto& x : cur)
          next.push_back({x.mono * Monomial::variable(i, k), x.coeff * Scalar(c)});
      }
      cur = std::move(next);
    }
    for (auto& x : cur) out.push_back(std::move(x));
  }
  return from_terms(std::move(out));
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    if (a.t_[i].mono != b.t_[i].mono || !(a.t_[i].coeff == b.t_[i].coeff)) return false;
  return true;
}

// ---------------------------------------------------------------------------

bool same_field(const ParamFieldPtr& a, const ParamFieldPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

ExpPoly::ExpPoly(ParamFieldPtr params, std::size_t vars) : params_(std::move(params)), v_(vars) {}

ExpPoly ExpPoly::constant(ParamFieldPtr params, std::size_t vars, const Scalar& c) {
  ExpPoly e(params, vars);
  if (!c.is_zero()) e.t_.push_back({Character(params->size(), vars), MPoly(c)});
  return e;
}

ExpPoly ExpPoly::character(ParamFieldPtr params, std::size_t vars, Character chr, const Scalar& c) {
  if (chr.params() != params->size() || chr.vars() != vars)
    throw ContextMismatch("character shape does not match context");
  ExpPoly e(params, vars);
  if (!c.is_zero()) e.t_.push_back({std::move(chr), MPoly(c)});
  return e;
}

ExpPoly ExpPoly::variable(ParamFieldPtr params, std::size_t vars, std::size_t i) {
  if (i >= vars) throw ContextMismatch("variable index out of range");
  ExpPoly e(params, vars);
  e.t_.push_back({Character(params->size(), vars), MPoly::variable(i)});
  return e;
}

ExpPoly ExpPoly::monomial_scalar(ParamFieldPtr params, std::size_t vars, std::span<const int64_t> exps) {
  Scalar c = params->laurent(exps);
  return constant(std::move(params), vars, c);
}

bool ExpPoly::is_monomial_character() const {
  return t_.size() == 1 && t_[0].poly.is_constant();
}

void ExpPoly::check_context(const ExpPoly& o) const {
  if (!params_ || !o.params_) return;
  if (v_ != o.v_ || !same_field(params_, o.params_))
    throw ContextMismatch("exponential polynomials over different contexts");
}

void ExpPoly::adopt_context(const ExpPoly& o) {
  if (!params_) {
    params_ = o.params_;
    v_ = o.v_;
  }
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly r = *this;
  for (auto& t : r.t_) t.poly = -t.poly;
  return r;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  check_context(o);
  adopt_context(o);
  if (o.t_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(t_.size() + o.t_.size());
  std::size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j == o.t_.size() || (i < t_.size() && t_[i].chr < o.t_[j].chr)) {
      out.push_back(std::move(t_[i++]));
    } else if (i == t_.size() || o.t_[j].chr < t_[i].chr) {
      out.push_back(o.t_[j++]);
    } else {
      MPoly p = t_[i].poly + o.t_[j].poly;
      if (!p.is_zero()) out.push_back({std::move(t_[i].chr), std::move(p)});
      ++i;
      ++j;
    }
  }
  t_ = std::move(out);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) { return *this += -o; }

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  a.check_context(b);
  ExpPoly r(a.params_ ? a.params_ : b.params_, a.params_ ? a.v_ : b.v_);
  if (a.is_zero() || b.is_zero()) return r;
  std::map<Character, MPoly> acc;
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) {
      MPoly p = x.poly * y.poly;
      if (p.is_zero()) continue;
      auto [it, fresh] = acc.try_emplace(x.chr + y.chr, p);
      if (!fresh) it->second += p;
    }
  for (auto& [chr, p] : acc)
    if (!p.is_zero()) r.t_.push_back({chr, std::move(p)});
  return r;
}

ExpPoly ExpPoly::scaled(const Scalar& c) const {
  ExpPoly r(params_, v_);
  if (c.is_zero()) return r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back({t.chr, t.poly.scaled(c)});
  return r;
}

ExpPoly ExpPoly::shifted(std::span<const int32_t> d) const {
  ExpPoly r(params_, v_);
  r.t_.reserve(t_.size());
  for (const auto& t : t_) {
    auto e = t.chr.exponents_at(d);
    Scalar f = params_->laurent(e);
    r.t_.push_back({t.chr, t.poly.shifted(d).scaled(f)});
  }
  return r;
}

ExpPoly ExpPoly::substituted(std::size_t var, int64_t value) const {
  ExpPoly r(params_, v_);
  std::map<Character, MPoly> acc;
  for (const auto& t : t_) {
    Scalar f = params_->laurent(t.chr.column_times(var, value));
    MPoly p = t.poly.substituted(var, value).scaled(f);
    if (p.is_zero()) continue;
    auto [it, fresh] = acc.try_emplace(t.chr.without_column(var), p);
    if (!fresh) it->second += p;
  }
  for (auto& [chr, p] : acc)
    if (!p.is_zero()) r.t_.push_back({chr, std::move(p)});
  return r;
}

Scalar ExpPoly::eval(std::span<const int64_t> m) const {
  if (m.size() != v_) throw ContextMismatch("evaluation point has wrong length");
  Scalar s;
  for (const auto& t : t_) s += params_->laurent(t.chr.exponents_at(m)) * t.poly.eval(m);
  return s;
}

int64_t ExpPoly::degree() const {
  int64_t d = -1;
  for (const auto& t : t_) d = std::max(d, t.poly.degree());
  return d;
}

int32_t ExpPoly::max_character_exponent() const {
  int32_t m = 0;
  for (const auto& t : t_) m = std::max(m, t.chr.max_abs());
  return m;
}

bool operator==(const ExpPoly& a, const ExpPoly& b) {
  if (a.params_ && b.params_ && (a.v_ != b.v_ || !same_field(a.params_, b.params_))) return false;
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    if (a.t_[i].chr != b.t_[i].chr || !(a.t_[i].poly == b.t_[i].poly)) return false;
  return true;
}

std::size_t ExpPoly::hash() const {
  std::size_t h = t_.size();
  for (const auto& t : t_) {
    h = h * 31 + t.chr.hash();
    for (const auto& x : t.poly.terms()) h = h * 31 + x.mono.hash() * 7 + x.coeff.hash();
  }
  return h;
}

// ---------------------------------------------------------------------------
// Text

std::string variable_name(std::size_t i, std::size_t vars) {
  return vars == 1 ? std::string("m") : "m" + std::to_string(i + 1);
}

namespace {

std::string linear_text(const Character& c, std::size_t t) {
  std::string s;
  for (std::size_t i = 0; i < c.vars(); ++i) {
    int32_t k = c.at(t, i);
    if (k == 0) continue;
    std::string name = variable_name(i, c.vars());
    if (s.empty()) {
      if (k < 0) s += '-';
    } else {
      s += k < 0 ? " - " : " + ";
    }
    int32_t a = k < 0 ? -k : k;
    if (a != 1) s += std::to_string(a) + "*";
    s += name;
  }
  return s;
}

std::string mono_text(const Monomial& m, std::size_t vars) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += variable_name(i, vars);
    if (m[i] != 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

}  // namespace

std::string render(const ExpPoly& e) {
  if (e.is_zero()) return "0";
  const ParamField& f = *e.params();
  std::vector<std::string> terms;
  for (const auto& t : e.terms()) {
    std::string chr;
    for (std::size_t p = 0; p < t.chr.params(); ++p) {
      std::string lin = linear_text(t.chr, p);
      if (lin.empty()) continue;
      if (!chr.empty()) chr += '*';
      chr += f.name(p) + "^[" + lin + "]";
    }
    for (const auto& x : t.poly.terms()) {
      std::string rest = mono_text(x.mono, e.vars());
      if (!chr.empty()) rest += (rest.empty() ? "" : "*") + chr;
      std::string coeff;
      if (rest.empty()) {
        coeff = renders_simple(x.coeff) ? render(x.coeff, f) : "(" + render(x.coeff, f) + ")";
        terms.push_back(coeff);
      } else if (x.coeff.is_one()) {
        terms.push_back(rest);
      } else if (x.coeff == Scalar(-1)) {
        terms.push_back("-" + rest);
      } else {
        coeff = renders_simple(x.coeff) ? render(x.coeff, f) : "(" + render(x.coeff, f) + ")";
        terms.push_back(coeff + "*" + rest);
      }
    }
  }
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    out += terms[i];
  }
  return out;
}

namespace {

struct ExpValue {
  ExpPoly e;
  std::optional<std::size_t> bare_param;
};

struct ExpTraits {
  using Value = ExpValue;
  ParamFieldPtr params;
  std::size_t vars;

  Value wrap(ExpPoly e) { return {std::move(e), std::nullopt}; }
  Value number(const mpz_class& n, const Token&) {
    return wrap(ExpPoly::constant(params, vars, Scalar(Rational(n))));
  }
  Value ident(const Token& t) {
    for (std::size_t i = 0; i < vars; ++i)
      if (t.text == variable_name(i, vars)) return wrap(ExpPoly::variable(params, vars, i));
    if (auto p = params->index_of(t.text))
      return {ExpPoly::constant(params, vars, params->param(*p)), *p};
    throw SyntaxError("unknown identifier '" + t.text + "'", t.line, t.column);
  }
  Value indexed(const Token& t, std::vector<int64_t>) {
    throw SyntaxError("unexpected index on '" + t.text + "'", t.line, t.column);
  }
  Value add(Value a, Value b) { return wrap(a.e + b.e); }
  Value sub(Value a, Value b) { return wrap(a.e - b.e); }
  Value mul(Value a, Value b) { return wrap(a.e * b.e); }
  Value div(Value a, Value b, const Token& at) {
    if (b.e.is_zero() || b.e.terms().size() != 1 || !b.e.terms()[0].chr.is_zero() ||
        !b.e.terms()[0].poly.is_constant())
      throw SyntaxError("division only by a nonzero scalar", at.line, at.column);
    return wrap(a.e.scaled(b.e.terms()[0].poly.terms()[0].coeff.inverse()));
  }
  Value neg(Value a) { return wrap(-a.e); }
  Value pow(Value a, int64_t k, const Token& at) {
    if (k < 0) {
      if (a.e.terms().size() != 1 || !a.e.terms()[0].poly.is_constant())
        throw SyntaxError("negative power of a non-invertible term", at.line, at.column);
      const auto& t = a.e.terms()[0];
      Scalar c = t.poly.terms()[0].coeff.inverse().pow(-k);
      Character chr(params->size(), vars);
      for (int64_t j = 0; j < -k; ++j) chr = chr + (-t.chr);
      return wrap(ExpPoly::character(params, vars, chr, c));
    }
    ExpPoly r = ExpPoly::constant(params, vars, Scalar(1));
    for (int64_t j = 0; j < k; ++j) r = r * a.e;
    return wrap(std::move(r));
  }
  Value pow_linear(Value a, const LinearForm& lf, const Token& at) {
    if (!a.bare_param) throw SyntaxError("symbolic exponent needs a parameter base", at.line, at.column);
    Character chr(params->size(), vars);
    for (const auto& [name, c] : lf.terms) {
      std::size_t i = vars;
      for (std::size_t k = 0; k < vars; ++k)
        if (variable_name(k, vars) == name) i = k;
      if (i == vars) throw SyntaxError("unknown exponent variable '" + name + "'", at.line, at.column);
      chr.set(*a.bare_param, i, chr.at(*a.bare_param, i) + static_cast<int32_t>(c));
    }
    ExpPoly e = ExpPoly::character(params, vars, chr);
    if (lf.constant != 0) e = e.scaled(params->power(*a.bare_param, lf.constant));
    return wrap(std::move(e));
  }
};

}  // namespace

ExpPoly parse_exppoly(std::string_view text, ParamFieldPtr params, std::size_t vars) {
  ExpTraits tr{params, vars};
  AlgebraicParser<ExpTraits> p(text, tr);
  return p.parse().e;
}

std::vector<std::pair<ExpAxis, Scalar>> flatten(const ExpPoly& e) {
  std::vector<std::pair<ExpAxis, Scalar>> out;
  for (const auto& t : e.terms())
    for (const auto& x : t.poly.terms()) out.push_back({ExpAxis{t.chr, x.mono}, x.coeff});
  return out;
}

std::optional<std::vector<Scalar>> coordinates(const ExpPoly& target, const std::vector<ExpPoly>& basis) {
  std::map<ExpAxis, std::size_t> axes;
  auto sparse = [&](const ExpPoly& e) {
    if (target.params() && e.params() &&
        (e.vars() != target.vars() || !same_field(e.params(), target.params())))
      throw ContextMismatch("coordinates over different contexts");
    SparseVec v;
    for (auto& [ax, s] : flatten(e)) {
      auto [it, fresh] = axes.try_emplace(ax, axes.size());
      v.push_back({it->second, s});
    }
    return v;
  };
  std::vector<SparseVec> cols;
  for (const auto& b : basis) cols.push_back(sparse(b));
  SparseVec t = sparse(target);
  std::size_t np = target.params() ? target.params()->size() : 0;
  return solve_in_span(cols, t, axes.size(), np);
}

}  // namespace qdop
