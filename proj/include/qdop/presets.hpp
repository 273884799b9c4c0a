#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdop/shiftop.hpp"

namespace qdop {

enum class PresetId {
  D_poly_1,
  D_laurent_1,
  D_poly_n,
  Delta_n,
  SkewGroup_n,
  WeylLambda_n,
  QuantumPlane,
  Torus_A1,
  Torus_A2,
  Torus_A3,
  Exterior_n,
};

std::string_view preset_name(PresetId id);
std::optional<PresetId> preset_from_name(std::string_view name);
const std::vector<PresetId>& all_presets();

using Exponents = std::vector<int64_t>;

// beta(e_i, e_j) = sign_ij * prod_t p_t^{E_ij[t]}, extended bimultiplicatively.
class Bicharacter {
 public:
  Bicharacter() = default;
  Bicharacter(std::size_t rank, std::size_t params);

  std::size_t rank() const { return n_; }
  std::size_t params() const { return s_; }
  void set(std::size_t i, std::size_t j, Exponents exps, int sign = 1);
  const Exponents& exponents(std::size_t i, std::size_t j) const { return e_.at(i * n_ + j); }
  int sign(std::size_t i, std::size_t j) const { return sign_.at(i * n_ + j); }

  // Exponent vector and sign of beta(a, b).
  Exponents exponents(std::span<const int32_t> a, std::span<const int32_t> b) const;
  int sign(std::span<const int32_t> a, std::span<const int32_t> b) const;
  Scalar value(std::span<const int32_t> a, std::span<const int32_t> b, const ParamField& f) const;
  // Character m -> beta(a, m); requires all signs +1.
  Character weight(std::span<const int32_t> a) const;

 private:
  std::size_t n_ = 0, s_ = 0;
  std::vector<Exponents> e_;
  std::vector<int> sign_;
};

// Dense operator on the exterior algebra, basis indexed by subsets of
// {1..n} as bit masks (bit i-1 for xi_i). Column c is the image of basis
// element c.
class ExtOperator {
 public:
  ExtOperator() = default;
  ExtOperator(ParamFieldPtr params, std::size_t n);
  static ExtOperator identity(ParamFieldPtr params, std::size_t n);

  const ParamFieldPtr& params() const { return params_; }
  std::size_t n() const { return n_; }
  std::size_t dim() const { return std::size_t(1) << n_; }
  const Scalar& at(std::size_t row, std::size_t col) const { return a_[row * dim() + col]; }
  void set(std::size_t row, std::size_t col, Scalar v) { a_[row * dim() + col] = std::move(v); }
  bool is_zero() const;

  ExtOperator operator-() const;
  ExtOperator& operator+=(const ExtOperator& o);
  ExtOperator& operator-=(const ExtOperator& o);
  friend ExtOperator operator+(ExtOperator a, const ExtOperator& b) { return a += b; }
  friend ExtOperator operator-(ExtOperator a, const ExtOperator& b) { return a -= b; }
  friend ExtOperator operator*(const ExtOperator& a, const ExtOperator& b);
  ExtOperator scaled(const Scalar& c) const;
  ExtOperator pow(int64_t k) const;
  std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

  friend bool operator==(const ExtOperator& a, const ExtOperator& b);

 private:
  void check_context(const ExtOperator& o) const;
  ParamFieldPtr params_;
  std::size_t n_ = 0;
  std::vector<Scalar> a_;
};

// Multiparameter exterior data: p[i][j] with p_ji = 1/p_ij and p_ii = -1.
struct ExteriorParams {
  ParamFieldPtr params;
  std::size_t n = 0;
  std::vector<std::vector<Scalar>> p;
};

ExteriorParams default_exterior_params(std::size_t n);
// Throws InvalidP unless p is n x n with p_ii = -1 and p_ij p_ji = 1.
void validate_exterior_params(const ExteriorParams& e);
// Coefficient c with xi_S xi_T = c xi_{S u T} (zero when S and T meet).
Scalar exterior_product_sign(const ExteriorParams& e, unsigned s, unsigned t);
ExtOperator exterior_left_mult(const ExteriorParams& e, unsigned mask);
ExtOperator exterior_sigma(const ExteriorParams& e, std::span<const int32_t> gamma);
// Left sigma_{-e_i}-derivation with delta_i(xi_j) = [i = j]; i is 1-based.
ExtOperator exterior_delta(const ExteriorParams& e, std::size_t i);
std::string exterior_basis_name(unsigned mask);

// c * g_1 g_2 ... g_k in generator names.
struct Word {
  Scalar coeff;
  std::vector<std::string> letters;
};
// sum of words = 0
struct Relation {
  std::string label;
  std::vector<Word> terms;
};

struct AlgebraPreset {
  PresetId id = PresetId::D_poly_1;
  std::size_t n = 1;
  ParamFieldPtr params;
  ModuleSpec module;
  Bicharacter bichar;
  std::vector<std::string> var_names;
  std::vector<std::string> generator_names;  // declaration order
  std::map<std::string, ShiftOp> generators;
  std::map<std::string, ExtOperator> ext_generators;
  std::optional<ExteriorParams> exterior;
  std::vector<std::vector<Scalar>> lambda;  // WeylLambda_n only
  std::vector<Relation> relations;

  bool is_exterior() const { return exterior.has_value(); }
  bool has(std::string_view name) const;
  // Named generator; sg[g1,..,gv] resolves to sigma_gamma for any gamma.
  ShiftOp generator(std::string_view name) const;
  ExtOperator ext_generator(std::string_view name) const;
  ShiftOp sigma(std::span<const int32_t> gamma) const;
  ExtOperator ext_sigma(std::span<const int32_t> gamma) const;
  // q-derivative along variable i (0-based) twisted by beta^k: x^m -> [m_i]_{beta(e_i,e_i)^k} x^{m-e_i}.
  ShiftOp q_derivative(std::size_t i, int64_t k) const;
  QPolynomial monomial(IVec exps, const Scalar& c = Scalar(1)) const;
};

struct PresetOptions {
  std::optional<std::size_t> n;
  std::map<std::string, Rational> pins;
  // WeylLambda_n only; defaults to lambda_ij = q_ji.
  std::optional<std::vector<std::vector<Scalar>>> lambda;
  std::optional<ParamFieldPtr> lambda_field;
  // Torus and D_poly_n/Delta_n/SkewGroup_n: first s variables Laurent.
  std::optional<std::size_t> laurent_count;
};

AlgebraPreset build_preset(PresetId id, const PresetOptions& opts = {});

// Parameter names used by a preset at arity n, in field order.
std::vector<std::string> preset_param_names(PresetId id, std::size_t n);

AlgebraPreset weyl_lambda(std::size_t n, const std::vector<std::vector<Scalar>>& lambda, ParamFieldPtr params);

// Throws PreconditionViolated when a pinned value is 0 or +-1 or the pinned
// values are multiplicatively dependent.
void check_generic_pins(const ParamField& f);

// The Laurent exponent vector of s when s is a monic Laurent monomial.
std::optional<Exponents> as_laurent_monomial(const Scalar& s, std::size_t nparams);

// Name of sigma_gamma, e.g. sg[1,0,-1].
std::string sigma_name(std::span<const int32_t> gamma);

}  // namespace qdop
