#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qdop/presets.hpp"

namespace qdop {

// Free-word expression over the generators of a preset.
struct Expression {
  enum class Kind { Scalar, Generator, Sum, Product, Power };

  Kind kind = Kind::Scalar;
  Scalar value;                    // Scalar
  std::string name;                // Generator
  int64_t exponent = 0;            // Power
  std::vector<Expression> children;  // Sum, Product (in order), Power (one base)

  static Expression scalar(Scalar s);
  static Expression generator(std::string name);
  static Expression sum(std::vector<Expression> terms);
  static Expression product(std::vector<Expression> factors);
  static Expression power(Expression base, int64_t k);

  bool has_generators() const;
  // Number of generator occurrences, counting powers with multiplicity.
  std::size_t length() const;
  friend bool operator==(const Expression& a, const Expression& b);
};

// Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := atom ('^' int)?; atom := scalar | ident | ident '[' ints ']' | '(' expr ')'.
// Identifiers resolve to generators of the preset first, then to parameters.
Expression parse_expression(std::string_view src, const AlgebraPreset& preset);

std::string render(const Expression& e, const ParamField& field);

ShiftOp evaluate(const Expression& e, const AlgebraPreset& preset);
ExtOperator evaluate_ext(const Expression& e, const AlgebraPreset& preset);

// Module element written with the preset's variable names, e.g. x^3 or
// q*x1*x2 - x3^2.
QPolynomial parse_polynomial(std::string_view src, const AlgebraPreset& preset);

}  // namespace qdop
