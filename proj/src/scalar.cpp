#include <algorithm>

#include "qdop/error.hpp"
#include "qdop/parse.hpp"
#include "qdop/scalar.hpp"

namespace qdop {

Scalar Scalar::reduced(Poly num, Poly den, bool need_gcd) {
  if (den.is_zero()) throw DivisionByZero("zero denominator");
  Scalar s;
  if (num.is_zero()) return s;
  if (den.is_constant()) {
    s.num_ = num.scaled(1 / den.constant_value());
    return s;
  }
  if (need_gcd) {
    Poly g = gcd(num, den);
    if (!g.is_one()) {
      num = *exact_div(num, g);
      den = *exact_div(den, g);
    }
  }
  Rational lc = den.leading().coeff;
  if (lc != 1) {
    Rational inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  return s;
}

Scalar Scalar::fraction(Poly num, Poly den) { return reduced(std::move(num), std::move(den), true); }

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.num_ = -r.num_;
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    Scalar r;
    r.num_ = a.num_ + b.num_;
    if (r.num_.is_zero()) return Scalar();
    if (a.den_.is_one()) {
      r.den_ = a.den_;
      return r;
    }
    return Scalar::reduced(std::move(r.num_), a.den_, true);
  }
  if (a.den_.is_one()) {
    Scalar r;
    r.num_ = a.num_ * b.den_ + b.num_;
    r.den_ = b.den_;
    // gcd(num, den) stays 1: any common factor would divide b.num_.
    return r.num_.is_zero() ? Scalar() : r;
  }
  if (b.den_.is_one()) return b + a;
  Poly g = gcd(a.den_, b.den_);
  Poly ad = *exact_div(a.den_, g);
  Poly bd = *exact_div(b.den_, g);
  Poly num = a.num_ * bd + b.num_ * ad;
  Poly den = ad * b.den_;
  if (num.is_zero()) return Scalar();
  if (g.is_one()) {
    Scalar r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
  }
  return Scalar::reduced(std::move(num), std::move(den), true);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.is_zero() || b.is_zero()) return Scalar();
  if (a.den_.is_one() && b.den_.is_one()) return Scalar(a.num_ * b.num_);
  if (a.is_constant()) {
    Scalar r = b;
    r.num_ = r.num_.scaled(a.constant_value());
    return r;
  }
  if (b.is_constant()) return b * a;
  Poly g1 = gcd(a.num_, b.den_);
  Poly g2 = gcd(b.num_, a.den_);
  Poly n1 = g1.is_one() ? a.num_ : *exact_div(a.num_, g1);
  Poly d2 = g1.is_one() ? b.den_ : *exact_div(b.den_, g1);
  Poly n2 = g2.is_one() ? b.num_ : *exact_div(b.num_, g2);
  Poly d1 = g2.is_one() ? a.den_ : *exact_div(a.den_, g2);
  return Scalar::reduced(n1 * n2, d1 * d2, false);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero scalar");
  return reduced(den_, num_, false);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) throw DivisionByZero("division by zero scalar");
  return a * b.inverse();
}

Scalar Scalar::pow(int64_t k) const {
  if (k < 0) return inverse().pow(-k);
  if (num_.terms().size() == 1 && den_.terms().size() == 1) {
    Scalar r;
    r.num_ = num_.pow(static_cast<unsigned>(k));
    r.den_ = den_.pow(static_cast<unsigned>(k));
    return r;
  }
  Scalar result(1), base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

std::size_t Scalar::hash() const { return num_.hash() * 1000003u ^ den_.hash(); }

Scalar q_number(int64_t n, const Scalar& base) {
  if (base.is_one()) return Scalar(n);
  Scalar sum;
  if (n >= 0) {
    Scalar p(1);
    for (int64_t i = 0; i < n; ++i) {
      sum += p;
      p = p * base;
    }
    return sum;
  }
  Scalar inv = base.inverse(), p = inv;
  for (int64_t i = 0; i < -n; ++i) {
    sum -= p;
    p = p * inv;
  }
  return sum;
}

// ---------------------------------------------------------------------------

ParamField::ParamField(std::vector<std::string> names)
    : names_(std::move(names)), values_(names_.size()) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw PreconditionViolated("duplicate parameter " + names_[i]);
}

std::optional<std::size_t> ParamField::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

void ParamField::pin(std::size_t i, const Rational& value) { values_.at(i) = value; }

bool ParamField::any_pinned() const {
  return std::any_of(values_.begin(), values_.end(), [](const auto& v) { return v.has_value(); });
}

Scalar ParamField::param(std::size_t i) const {
  if (values_.at(i)) return Scalar(*values_[i]);
  return Scalar::variable(i);
}

Scalar ParamField::power(std::size_t i, int64_t k) const {
  if (k == 0) return Scalar(1);
  if (values_.at(i)) return Scalar(*values_[i]).pow(k);
  if (k > 0) return Scalar(Poly::variable(i, static_cast<int32_t>(k)));
  return Scalar::fraction(Poly(1), Poly::variable(i, static_cast<int32_t>(-k)));
}

Scalar ParamField::laurent(std::span<const int64_t> exps) const {
  Monomial::Storage up, down;
  Rational c = 1;
  for (std::size_t t = 0; t < exps.size(); ++t) {
    int64_t e = exps[t];
    if (e == 0) continue;
    if (values_.at(t)) {
      Rational v = *values_[t];
      mpz_class n, d;
      unsigned long a = static_cast<unsigned long>(e > 0 ? e : -e);
      mpz_pow_ui(n.get_mpz_t(), v.get_num_mpz_t(), a);
      mpz_pow_ui(d.get_mpz_t(), v.get_den_mpz_t(), a);
      Rational f(n, d);
      f.canonicalize();
      if (e > 0) c *= f;
      else c /= f;
      continue;
    }
    if (up.size() <= t) up.resize(t + 1, 0);
    if (down.size() <= t) down.resize(t + 1, 0);
    (e > 0 ? up : down)[t] = static_cast<int32_t>(e > 0 ? e : -e);
  }
  return Scalar::fraction(Poly::monomial(Monomial(up), c), Poly::monomial(Monomial(down)));
}

// ---------------------------------------------------------------------------
// Text

namespace {

std::string monomial_text(const Monomial& m, const ParamField& field) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += i < field.size() ? field.name(i) : "p" + std::to_string(i);
    if (m[i] != 1) s += '^' + std::to_string(m[i]);
  }
  return s;
}

}  // namespace

std::string render(const Poly& p, const ParamField& field) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += '-';
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono = monomial_text(t.mono, field);
    if (mono.empty()) {
      out += c.get_str();
    } else if (c == 1) {
      out += mono;
    } else {
      out += c.get_str() + "*" + mono;
    }
  }
  return out;
}

std::string render(const Scalar& s, const ParamField& field) {
  std::string num = render(s.num(), field);
  if (s.den().is_one()) return num;
  if (s.num().terms().size() > 1) num = "(" + num + ")";
  std::string den = render(s.den(), field);
  const auto& dt = s.den().terms();
  bool den_atom = dt.size() == 1 && dt[0].coeff == 1 && dt[0].mono.degree() == 1;
  if (!den_atom) den = "(" + den + ")";
  return num + "/" + den;
}

bool renders_simple(const Scalar& s) {
  if (!s.den().is_one()) return false;
  if (s.num().terms().size() > 1) return false;
  if (s.num().is_zero()) return true;
  const auto& t = s.num().terms()[0];
  return t.mono.is_one() && mpz_cmp_ui(t.coeff.get_den_mpz_t(), 1) == 0;
}

namespace {

struct ScalarTraits {
  using Value = Scalar;
  const ParamField& field;

  Value number(const mpz_class& n, const Token&) { return Scalar(Rational(n)); }
  Value ident(const Token& t) {
    auto i = field.index_of(t.text);
    if (!i) throw SyntaxError("unknown parameter '" + t.text + "'", t.line, t.column);
    return field.param(*i);
  }
  Value indexed(const Token& t, std::vector<int64_t>) {
    throw SyntaxError("unexpected index on '" + t.text + "'", t.line, t.column);
  }
  Value add(Value a, Value b) { return a + b; }
  Value sub(Value a, Value b) { return a - b; }
  Value mul(Value a, Value b) { return a * b; }
  Value div(Value a, Value b, const Token& at) {
    if (b.is_zero()) throw SyntaxError("division by zero", at.line, at.column);
    return a / b;
  }
  Value neg(Value a) { return -a; }
  Value pow(Value a, int64_t k, const Token& at) {
    if (k < 0 && a.is_zero()) throw SyntaxError("negative power of zero", at.line, at.column);
    return a.pow(k);
  }
  Value pow_linear(Value, const LinearForm&, const Token& at) {
    throw SyntaxError("symbolic exponent not allowed in a scalar", at.line, at.column);
  }
};

}  // namespace

Scalar parse_scalar(std::string_view text, const ParamField& field) {
  ScalarTraits tr{field};
  AlgebraicParser<ScalarTraits> p(text, tr);
  return p.parse();
}

Rational specialize(const Scalar& s, std::span<const Rational> point) {
  Rational d = s.den().eval(point);
  if (sgn(d) == 0) throw DenominatorVanishes("denominator vanishes at specialization");
  Rational r = s.num().eval(point) / d;
  r.canonicalize();
  return r;
}

std::optional<uint32_t> rational_mod(const Rational& r, uint32_t prime) {
  unsigned long n = mpz_fdiv_ui(r.get_num_mpz_t(), prime);
  unsigned long d = mpz_fdiv_ui(r.get_den_mpz_t(), prime);
  if (d == 0) return std::nullopt;
  mpz_class inv, dd(d), pp(prime);
  mpz_invert(inv.get_mpz_t(), dd.get_mpz_t(), pp.get_mpz_t());
  return static_cast<uint32_t>((static_cast<uint64_t>(n) * inv.get_ui()) % prime);
}

namespace {

std::optional<uint32_t> poly_mod(const Poly& p, std::span<const uint32_t> point, uint32_t prime) {
  uint64_t sum = 0;
  for (const auto& t : p.terms()) {
    auto c = rational_mod(t.coeff, prime);
    if (!c) return std::nullopt;
    uint64_t v = *c;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      int32_t e = t.mono[i];
      if (e == 0) continue;
      if (i >= point.size()) throw ContextMismatch("evaluation point too short");
      uint64_t b = point[i] % prime, acc = 1;
      for (uint32_t k = static_cast<uint32_t>(e); k; k >>= 1) {
        if (k & 1) acc = acc * b % prime;
        b = b * b % prime;
      }
      v = v * acc % prime;
    }
    sum = (sum + v) % prime;
  }
  return static_cast<uint32_t>(sum);
}

}  // namespace

std::optional<uint32_t> specialize_mod(const Scalar& s, std::span<const uint32_t> point,
                                       uint32_t prime) {
  auto n = poly_mod(s.num(), point, prime);
  auto d = poly_mod(s.den(), point, prime);
  if (!n || !d || *d == 0) return std::nullopt;
  mpz_class inv, dd(*d), pp(prime);
  mpz_invert(inv.get_mpz_t(), dd.get_mpz_t(), pp.get_mpz_t());
  return static_cast<uint32_t>(static_cast<uint64_t>(*n) * inv.get_ui() % prime);
}

}  // namespace qdop
