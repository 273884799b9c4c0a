#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace qdop {

using Rational = mpq_class;

// Exponent vector with trailing zeros trimmed, so monomials over a prefix of
// the variables compare equal to their extensions. Ordered graded-lex.
class Monomial {
 public:
  using Storage = boost::container::small_vector<int32_t, 4>;

  Monomial() = default;
  explicit Monomial(Storage exps);
  static Monomial variable(std::size_t index, int32_t power = 1);

  int32_t operator[](std::size_t i) const { return i < e_.size() ? e_[i] : 0; }
  std::size_t size() const { return e_.size(); }
  int64_t degree() const { return deg_; }
  bool is_one() const { return e_.empty(); }
  const Storage& exponents() const { return e_; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  // Requires divides(o) to be checked by the caller when exponents must stay
  // non-negative.
  Monomial quotient(const Monomial& divisor) const;
  Monomial min_with(const Monomial& o) const;
  Monomial with(std::size_t i, int32_t value) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

  std::size_t hash() const;

 private:
  void trim();
  Storage e_;
  int64_t deg_ = 0;
};

// Sparse multivariate polynomial over Q, terms sorted by decreasing graded-lex
// order with no zero coefficients.
class Poly {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  Poly() = default;
  Poly(long c);  // NOLINT(google-explicit-constructor)
  Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
  static Poly monomial(Monomial m, const Rational& c = 1);
  static Poly variable(std::size_t i, int32_t power = 1);
  static Poly from_terms(std::vector<Term> terms);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].mono.is_one()); }
  bool is_one() const;
  Rational constant_value() const;
  const std::vector<Term>& terms() const { return t_; }
  const Term& leading() const { return t_.front(); }
  std::size_t nvars() const;
  int64_t degree() const { return t_.empty() ? -1 : t_.front().mono.degree(); }
  int32_t degree_in(std::size_t var) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Rational& c) const;
  Poly times_monomial(const Monomial& m, const Rational& c) const;
  Poly pow(unsigned k) const;

  Rational eval(std::span<const Rational> point) const;

  friend bool operator==(const Poly& a, const Poly& b);
  std::size_t hash() const;

 private:
  std::vector<Term> t_;
};

// Exact quotient if b divides a, otherwise nullopt. b must be nonzero.
std::optional<Poly> exact_div(const Poly& a, const Poly& b);
// Monic gcd over Q; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
// Positive rational c with a/c having coprime integer coefficients.
Rational rational_content(const Poly& a);

// Reduced quotient num/den of polynomials with den monic.
class Scalar {
 public:
  Scalar() : den_(1) {}
  Scalar(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(Poly p) : num_(std::move(p)), den_(1) {}
  static Scalar fraction(Poly num, Poly den);
  static Scalar variable(std::size_t i) { return Scalar(Poly::variable(i)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_one() && num_.is_one(); }
  bool is_constant() const { return den_.is_one() && num_.is_constant(); }
  bool is_polynomial() const { return den_.is_one(); }
  Rational constant_value() const { return num_.constant_value(); }

  Scalar operator-() const;
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar inverse() const;
  Scalar pow(int64_t k) const;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::size_t hash() const;

 private:
  // Cancels gcd (if need_gcd) and makes den monic.
  static Scalar reduced(Poly num, Poly den, bool need_gcd);
  Poly num_;
  Poly den_;
};

// [n]_b = 1 + b + ... + b^{n-1}; for negative n, (b^n - 1)/(b - 1).
Scalar q_number(int64_t n, const Scalar& base);

// Named parameters of the coefficient field. A parameter may be pinned to a
// rational value, in which case every scalar built through this object sees
// the value instead of the indeterminate.
class ParamField {
 public:
  ParamField() = default;
  explicit ParamField(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  void pin(std::size_t i, const Rational& value);
  const std::optional<Rational>& value(std::size_t i) const { return values_.at(i); }
  bool any_pinned() const;

  Scalar param(std::size_t i) const;
  Scalar power(std::size_t i, int64_t k) const;
  // prod_t p_t^{exps[t]}
  Scalar laurent(std::span<const int64_t> exps) const;

  friend bool operator==(const ParamField& a, const ParamField& b) {
    return a.names_ == b.names_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<Rational>> values_;
};

using ParamFieldPtr = std::shared_ptr<const ParamField>;

std::string render(const Poly& p, const ParamField& field);
std::string render(const Scalar& s, const ParamField& field);
// True when render() produces a single signed atom that needs no parentheses
// as a factor.
bool renders_simple(const Scalar& s);
Scalar parse_scalar(std::string_view text, const ParamField& field);

// Evaluate with param t replaced by point[t].
Rational specialize(const Scalar& s, std::span<const Rational> point);
// Value mod prime, or nullopt if a denominator vanishes mod the prime.
std::optional<uint32_t> specialize_mod(const Scalar& s, std::span<const uint32_t> point,
                                       uint32_t prime);
std::optional<uint32_t> rational_mod(const Rational& r, uint32_t prime);

}  // namespace qdop
