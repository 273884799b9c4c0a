#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "qdop/scalar.hpp"

namespace qdop {

using IVec = boost::container::small_vector<int32_t, 4>;

// Integer s x v matrix C; as a function of m in Z^v it is the product over
// parameters t of p_t^{(C m)_t}.
class Character {
 public:
  Character() = default;
  Character(std::size_t params, std::size_t vars) : s_(params), v_(vars), c_(params * vars, 0) {}

  std::size_t params() const { return s_; }
  std::size_t vars() const { return v_; }
  int32_t at(std::size_t t, std::size_t i) const { return c_[t * v_ + i]; }
  void set(std::size_t t, std::size_t i, int32_t x) { c_[t * v_ + i] = x; }
  bool is_zero() const;
  int32_t max_abs() const;

  Character operator+(const Character& o) const;
  Character operator-() const;
  // Exponent vector (C m)_t.
  std::vector<int64_t> exponents_at(std::span<const int32_t> m) const;
  std::vector<int64_t> exponents_at(std::span<const int64_t> m) const;
  // Column i times value, with column i zeroed in the returned character.
  std::vector<int64_t> column_times(std::size_t i, int64_t value) const;
  Character without_column(std::size_t i) const;

  friend bool operator==(const Character& a, const Character& b) = default;
  friend std::strong_ordering operator<=>(const Character& a, const Character& b);
  std::size_t hash() const;

 private:
  std::size_t s_ = 0, v_ = 0;
  boost::container::small_vector<int32_t, 8> c_;
};

// Polynomial in m_1..m_v with Scalar coefficients.
class MPoly {
 public:
  struct Term {
    Monomial mono;
    Scalar coeff;
  };

  MPoly() = default;
  explicit MPoly(const Scalar& c);
  static MPoly variable(std::size_t i);
  static MPoly from_terms(std::vector<Term> terms);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].mono.is_one()); }
  const std::vector<Term>& terms() const { return t_; }
  int64_t degree() const { return t_.empty() ? -1 : t_.front().mono.degree(); }

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  MPoly scaled(const Scalar& c) const;

  Scalar eval(std::span<const int64_t> m) const;
  MPoly substituted(std::size_t var, int64_t value) const;
  // P(m + d)
  MPoly shifted(std::span<const int32_t> d) const;

  friend bool operator==(const MPoly& a, const MPoly& b);

 private:
  std::vector<Term> t_;
};

// Finite sum of polynomial-times-character terms, canonical: characters
// unique and sorted, no zero polynomials. Zero is the empty sum.
class ExpPoly {
 public:
  struct Term {
    Character chr;
    MPoly poly;
  };

  ExpPoly() = default;
  ExpPoly(ParamFieldPtr params, std::size_t vars);
  static ExpPoly constant(ParamFieldPtr params, std::size_t vars, const Scalar& c);
  static ExpPoly character(ParamFieldPtr params, std::size_t vars, Character chr,
                           const Scalar& c = Scalar(1));
  static ExpPoly variable(ParamFieldPtr params, std::size_t vars, std::size_t i);
  // Laurent monomial in the parameters, exps indexed by parameter.
  static ExpPoly monomial_scalar(ParamFieldPtr params, std::size_t vars, std::span<const int64_t> exps);

  const ParamFieldPtr& params() const { return params_; }
  std::size_t vars() const { return v_; }
  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  // Single term c * chi_C(m) with constant polynomial part.
  bool is_monomial_character() const;

  ExpPoly operator-() const;
  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  ExpPoly scaled(const Scalar& c) const;

  // E(m + d)
  ExpPoly shifted(std::span<const int32_t> d) const;
  // E with m_var fixed to value; the result no longer depends on m_var.
  ExpPoly substituted(std::size_t var, int64_t value) const;
  Scalar eval(std::span<const int64_t> m) const;

  int64_t degree() const;
  int32_t max_character_exponent() const;

  friend bool operator==(const ExpPoly& a, const ExpPoly& b);
  std::size_t hash() const;

 private:
  void check_context(const ExpPoly& o) const;
  void adopt_context(const ExpPoly& o);
  void add_term(Character chr, MPoly poly);
  void canonicalize();

  ParamFieldPtr params_;
  std::size_t v_ = 0;
  std::vector<Term> t_;
};

bool same_field(const ParamFieldPtr& a, const ParamFieldPtr& b);

std::string variable_name(std::size_t i, std::size_t vars);
std::string render(const ExpPoly& e);
ExpPoly parse_exppoly(std::string_view text, ParamFieldPtr params, std::size_t vars);

// Coordinates of an ExpPoly along (character, m-monomial) axes.
struct ExpAxis {
  Character chr;
  Monomial mono;
  friend bool operator==(const ExpAxis&, const ExpAxis&) = default;
  friend std::strong_ordering operator<=>(const ExpAxis& a, const ExpAxis& b) {
    if (auto c = a.chr <=> b.chr; c != 0) return c;
    return a.mono <=> b.mono;
  }
};

std::vector<std::pair<ExpAxis, Scalar>> flatten(const ExpPoly& e);

// Coefficients c with target = sum c_i basis_i, or nullopt if target is not
// in the span. Exact over the parameter field.
std::optional<std::vector<Scalar>> coordinates(const ExpPoly& target, const std::vector<ExpPoly>& basis);

}  // namespace qdop
