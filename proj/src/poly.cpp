#include <algorithm>
#include <functional>

#include "qdop/error.hpp"
#include "qdop/scalar.hpp"

namespace qdop {

Monomial::Monomial(Storage exps) : e_(std::move(exps)) { trim(); }

Monomial Monomial::variable(std::size_t index, int32_t power) {
  Storage s(index + 1, 0);
  s[index] = power;
  return Monomial(std::move(s));
}

void Monomial::trim() {
  while (!e_.empty() && e_.back() == 0) e_.pop_back();
  deg_ = 0;
  for (int32_t x : e_) deg_ += x;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.e_.resize(std::max(e_.size(), o.e_.size()), 0);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = (*this)[i] + o[i];
  r.trim();
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  if (e_.size() > o.e_.size()) return false;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
  Monomial r;
  r.e_.resize(std::max(e_.size(), divisor.e_.size()), 0);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = (*this)[i] - divisor[i];
  r.trim();
  return r;
}

Monomial Monomial::min_with(const Monomial& o) const {
  Monomial r;
  r.e_.resize(std::min(e_.size(), o.e_.size()), 0);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = std::min(e_[i], o.e_[i]);
  r.trim();
  return r;
}

Monomial Monomial::with(std::size_t i, int32_t value) const {
  Monomial r = *this;
  if (r.e_.size() <= i) r.e_.resize(i + 1, 0);
  r.e_[i] = value;
  r.trim();
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.deg_ <=> b.deg_; c != 0) return c;
  std::size_t n = std::max(a.e_.size(), b.e_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (int32_t x : e_) h = (h ^ static_cast<std::size_t>(x + 0x51)) * 0x100000001b3ULL;
  return h;
}

// ---------------------------------------------------------------------------

Poly::Poly(long c) {
  if (c != 0) t_.push_back({Monomial(), Rational(c)});
}

Poly::Poly(const Rational& c) {
  if (sgn(c) != 0) t_.push_back({Monomial(), c});
}

Poly Poly::monomial(Monomial m, const Rational& c) {
  Poly p;
  if (sgn(c) != 0) p.t_.push_back({std::move(m), c});
  return p;
}

Poly Poly::variable(std::size_t i, int32_t power) {
  return monomial(Monomial::variable(i, power));
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono > b.mono; });
  Poly p;
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().mono == t.mono) {
      p.t_.back().coeff += t.coeff;
    } else {
      if (!p.t_.empty() && sgn(p.t_.back().coeff) == 0) p.t_.pop_back();
      p.t_.push_back(std::move(t));
    }
  }
  if (!p.t_.empty() && sgn(p.t_.back().coeff) == 0) p.t_.pop_back();
  return p;
}

bool Poly::is_one() const {
  return t_.size() == 1 && t_[0].mono.is_one() && t_[0].coeff == 1;
}

Rational Poly::constant_value() const {
  if (t_.empty()) return 0;
  if (!is_constant()) throw InvariantBreach("constant_value of non-constant polynomial");
  return t_[0].coeff;
}

std::size_t Poly::nvars() const {
  std::size_t n = 0;
  for (const auto& t : t_) n = std::max(n, t.mono.size());
  return n;
}

int32_t Poly::degree_in(std::size_t var) const {
  int32_t d = 0;
  for (const auto& t : t_) d = std::max(d, t.mono[var]);
  return d;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.coeff = -t.coeff;
  return r;
}

namespace {

template <class Combine>
std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a,
                                    const std::vector<Poly::Term>& b, Combine sign) {
  std::vector<Poly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono > b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono > a[i].mono) {
      out.push_back({b[j].mono, sign(b[j].coeff)});
      ++j;
    } else {
      Rational c = a[i].coeff + sign(b[j].coeff);
      if (sgn(c) != 0) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  if (o.t_.empty()) return *this;
  if (t_.empty()) return *this = o;
  t_ = merge_terms(t_, o.t_, [](const Rational& c) { return c; });
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.t_.empty()) return *this;
  t_ = merge_terms(t_, o.t_, [](const Rational& c) { return Rational(-c); });
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.t_.size() == 1) return b.times_monomial(a.t_[0].mono, a.t_[0].coeff);
  if (b.t_.size() == 1) return a.times_monomial(b.t_[0].mono, b.t_[0].coeff);
  std::vector<Poly::Term> acc;
  acc.reserve(a.t_.size() * b.t_.size());
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) acc.push_back({x.mono * y.mono, x.coeff * y.coeff});
  return Poly::from_terms(std::move(acc));
}

Poly Poly::scaled(const Rational& c) const {
  if (sgn(c) == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.coeff *= c;
  return r;
}

Poly Poly::times_monomial(const Monomial& m, const Rational& c) const {
  if (sgn(c) == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) {
    t.mono = t.mono * m;
    t.coeff *= c;
  }
  return r;
}

Poly Poly::pow(unsigned k) const {
  Poly result(1), base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Rational Poly::eval(std::span<const Rational> point) const {
  Rational sum = 0;
  for (const auto& t : t_) {
    Rational v = t.coeff;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      int32_t e = t.mono[i];
      if (e == 0) continue;
      if (i >= point.size()) throw ContextMismatch("evaluation point too short");
      mpz_class n, d;
      mpz_pow_ui(n.get_mpz_t(), point[i].get_num_mpz_t(), static_cast<unsigned long>(e));
      mpz_pow_ui(d.get_mpz_t(), point[i].get_den_mpz_t(), static_cast<unsigned long>(e));
      v *= Rational(n, d);
    }
    sum += v;
  }
  sum.canonicalize();
  return sum;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.t_.size() != b.t_.size()) return false;
  for (std::size_t i = 0; i < a.t_.size(); ++i)
    if (a.t_[i].mono != b.t_[i].mono || a.t_[i].coeff != b.t_[i].coeff) return false;
  return true;
}

std::size_t Poly::hash() const {
  std::size_t h = t_.size();
  for (const auto& t : t_) {
    h = h * 31 + t.mono.hash();
    h = h * 31 + std::hash<std::string>()(t.coeff.get_str());
  }
  return h;
}

// ---------------------------------------------------------------------------
// Division and gcd

std::optional<Poly> exact_div(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (a.is_zero()) return Poly();
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  const auto& lb = b.leading();
  if (b.terms().size() == 1) {
    Poly q;
    std::vector<Poly::Term> out;
    out.reserve(a.terms().size());
    for (const auto& t : a.terms()) {
      if (!lb.mono.divides(t.mono)) return std::nullopt;
      out.push_back({t.mono.quotient(lb.mono), t.coeff / lb.coeff});
    }
    return Poly::from_terms(std::move(out));
  }
  std::vector<Poly::Term> quot;
  Poly r = a;
  while (!r.is_zero()) {
    const auto& lr = r.leading();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    Monomial m = lr.mono.quotient(lb.mono);
    Rational c = lr.coeff / lb.coeff;
    quot.push_back({m, c});
    r -= b.times_monomial(m, c);
  }
  return Poly::from_terms(std::move(quot));
}

Rational rational_content(const Poly& a) {
  if (a.is_zero()) return 1;
  mpz_class g = 0, l = 1;
  for (const auto& t : a.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(g, l);
  c.canonicalize();
  return c;
}

namespace {

Poly integer_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  Poly r = p.scaled(1 / rational_content(p));
  if (sgn(r.leading().coeff) < 0) r = -r;
  return r;
}

// Coefficients of p viewed as a polynomial in variable k.
std::vector<Poly> coefficients_in(const Poly& p, std::size_t k) {
  std::vector<std::vector<Poly::Term>> buckets(static_cast<std::size_t>(p.degree_in(k)) + 1);
  for (const auto& t : p.terms()) buckets[t.mono[k]].push_back({t.mono.with(k, 0), t.coeff});
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(Poly::from_terms(std::move(b)));
  return out;
}

Poly leading_coeff_in(const Poly& p, std::size_t k, int32_t deg) {
  std::vector<Poly::Term> out;
  for (const auto& t : p.terms())
    if (t.mono[k] == deg) out.push_back({t.mono.with(k, 0), t.coeff});
  return Poly::from_terms(std::move(out));
}

Poly gcd_rec(const Poly& a, const Poly& b);

Poly content_in(const Poly& p, std::size_t k) {
  Poly g;
  for (const auto& c : coefficients_in(p, k)) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : gcd_rec(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

Poly primitive_in(const Poly& p, std::size_t k) {
  Poly c = content_in(p, k);
  auto q = exact_div(p, c);
  if (!q) throw InvariantBreach("content does not divide polynomial");
  return integer_primitive(*q);
}

// Pseudo-remainder of a by b in variable k, up to a unit of Q[other vars].
Poly prem_in(Poly r, const Poly& b, std::size_t k) {
  int32_t db = b.degree_in(k);
  Poly lb = leading_coeff_in(b, k, db);
  bool lb_const = lb.is_constant();
  Rational lb_inv = lb_const ? Rational(1 / lb.constant_value()) : Rational(0);
  while (!r.is_zero()) {
    int32_t dr = r.degree_in(k);
    if (dr < db) break;
    Poly lr = leading_coeff_in(r, k, dr);
    Monomial shift = Monomial::variable(k, dr - db);
    if (lb_const) {
      r -= (lr * b).times_monomial(shift, lb_inv);
    } else {
      r = lb * r - (lr * b).times_monomial(shift, 1);
    }
  }
  return r;
}

Poly gcd_rec(const Poly& a, const Poly& b) {
  if (a.is_zero()) return integer_primitive(b);
  if (b.is_zero()) return integer_primitive(a);
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a.terms().size() == 1 || b.terms().size() == 1) {
    Monomial g = a.terms()[0].mono;
    for (const auto& t : a.terms()) g = g.min_with(t.mono);
    for (const auto& t : b.terms()) g = g.min_with(t.mono);
    return Poly::monomial(g);
  }
  std::size_t nv = std::max(a.nvars(), b.nvars());
  std::size_t k = nv - 1;
  int32_t da = a.degree_in(k), db = b.degree_in(k);
  if (da == 0) return gcd_rec(a, content_in(b, k));
  if (db == 0) return gcd_rec(content_in(a, k), b);
  Poly ca = content_in(a, k), cb = content_in(b, k);
  Poly gc = gcd_rec(ca, cb);
  Poly x = integer_primitive(*exact_div(a, ca));
  Poly y = integer_primitive(*exact_div(b, cb));
  if (da < db) std::swap(x, y);
  while (true) {
    Poly r = prem_in(x, y, k);
    if (r.is_zero()) break;
    if (r.degree_in(k) == 0) return gc;
    x = std::move(y);
    y = primitive_in(r, k);
  }
  return gc * y;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return Poly();
  Poly g = gcd_rec(a, b);
  return g.scaled(1 / g.leading().coeff);
}

}  // namespace qdop
