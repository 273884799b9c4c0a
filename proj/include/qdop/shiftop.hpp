#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdop/exppoly.hpp"

namespace qdop {

struct ModuleSpec {
  std::size_t v = 1;
  // true: exponent of that variable ranges over Z, false: over N.
  std::vector<bool> laurent = {false};

  static ModuleSpec polynomial(std::size_t v) { return {v, std::vector<bool>(v, false)}; }
  static ModuleSpec laurent_all(std::size_t v) { return {v, std::vector<bool>(v, true)}; }
  bool is_guarded() const;
  friend bool operator==(const ModuleSpec&, const ModuleSpec&) = default;
};

struct IVecLess {
  bool operator()(const IVec& a, const IVec& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Graded-lex, larger first; used for canonical output order of polynomials.
bool grlex_greater(const IVec& a, const IVec& b);
struct GrlexGreater {
  bool operator()(const IVec& a, const IVec& b) const { return grlex_greater(a, b); }
};

// Element of the module: finitely many exponent vectors with coefficients.
class QPolynomial {
 public:
  QPolynomial() = default;
  QPolynomial(ParamFieldPtr params, ModuleSpec module);
  static QPolynomial monomial(ParamFieldPtr params, ModuleSpec module, IVec exps,
                              const Scalar& c = Scalar(1));

  const ParamFieldPtr& params() const { return params_; }
  const ModuleSpec& module() const { return module_; }
  const std::map<IVec, Scalar, GrlexGreater>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  void add(const IVec& exps, const Scalar& c);
  QPolynomial& operator+=(const QPolynomial& o);
  QPolynomial scaled(const Scalar& c) const;

  friend bool operator==(const QPolynomial& a, const QPolynomial& b);

 private:
  ParamFieldPtr params_;
  ModuleSpec module_;
  std::map<IVec, Scalar, GrlexGreater> t_;
};

std::string render(const QPolynomial& f, const std::vector<std::string>& var_names);

// Operator x^m -> sum_d c_d(m) x^{m+d}.
class ShiftOp {
 public:
  struct Term {
    IVec shift;
    ExpPoly coeff;
  };

  ShiftOp() = default;
  ShiftOp(ParamFieldPtr params, ModuleSpec module);
  static ShiftOp scalar(ParamFieldPtr params, ModuleSpec module, const Scalar& c);
  static ShiftOp identity(ParamFieldPtr params, ModuleSpec module) {
    return scalar(std::move(params), std::move(module), Scalar(1));
  }
  static ShiftOp single(ParamFieldPtr params, ModuleSpec module, IVec shift, ExpPoly coeff);

  const ParamFieldPtr& params() const { return params_; }
  const ModuleSpec& module() const { return module_; }
  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  const ExpPoly* coeff_at(const IVec& shift) const;

  ShiftOp operator-() const;
  ShiftOp& operator+=(const ShiftOp& o);
  ShiftOp& operator-=(const ShiftOp& o);
  friend ShiftOp operator+(ShiftOp a, const ShiftOp& b) { return a += b; }
  friend ShiftOp operator-(ShiftOp a, const ShiftOp& b) { return a -= b; }
  ShiftOp scaled(const Scalar& c) const;
  // Composition a o b (apply b first).
  friend ShiftOp operator*(const ShiftOp& a, const ShiftOp& b);

  // Two-sided inverse when op is a single invertible weighted shift on its
  // module; nullopt otherwise.
  std::optional<ShiftOp> inverse() const;
  ShiftOp pow(int64_t k) const;
  // Same coefficients declared on another module with the same arity.
  ShiftOp on_module(const ModuleSpec& m) const;

  friend bool operator==(const ShiftOp& a, const ShiftOp& b);

 private:
  void check_context(const ShiftOp& o) const;

  ParamFieldPtr params_;
  ModuleSpec module_;
  std::vector<Term> t_;
};

inline ShiftOp compose(const ShiftOp& a, const ShiftOp& b) { return a * b; }

struct GuardViolation {
  IVec shift;
  std::size_t var;
  int64_t value;
};

// First slab on which a negative shift of a non-Laurent variable has a
// nonvanishing coefficient; nullopt when op is well defined on the module.
std::optional<GuardViolation> domain_guard(const ShiftOp& op);
std::optional<GuardViolation> domain_guard(const ShiftOp& op, const ModuleSpec& module);

QPolynomial act(const ShiftOp& op, const QPolynomial& f);

// a o b - twist o b o twist^{-1} o a; with no twist the plain commutator.
// For b = lambda_r and twist = sigma_a this is [a, r]_a = a lambda_r - lambda_{sigma_a(r)} a.
ShiftOp commutator(const ShiftOp& a, const ShiftOp& b, const std::optional<ShiftOp>& twist = std::nullopt);

struct Cleared {
  IVec t;  // exponent of the monomial in the Laurent variables, indexed like laurent_vars
  ShiftOp composite;
};

// Smallest monomial t in the given Laurent variables with lambda_t o op well
// defined on the module where every variable is non-Laurent. lambdas[k] is
// left multiplication by x_{laurent_vars[k]} on op's module.
Cleared clear_negative_shifts(const ShiftOp& op, const std::vector<std::size_t>& laurent_vars,
                              const std::vector<ShiftOp>& lambdas);

std::string to_json(const ShiftOp& op);
ShiftOp shiftop_from_json(const std::string& text, ParamFieldPtr params = nullptr);

}  // namespace qdop
