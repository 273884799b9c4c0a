#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QDOP_DECLARE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

QDOP_DECLARE_ERROR(DivisionByZero);
QDOP_DECLARE_ERROR(DenominatorVanishes);
QDOP_DECLARE_ERROR(ContextMismatch);
QDOP_DECLARE_ERROR(DomainGuardViolation);
QDOP_DECLARE_ERROR(UndefinedGenerator);
QDOP_DECLARE_ERROR(NegativePowerOfNonInvertible);
QDOP_DECLARE_ERROR(UnsupportedArity);
QDOP_DECLARE_ERROR(InvalidLambda);
QDOP_DECLARE_ERROR(InvalidP);
QDOP_DECLARE_ERROR(UnknownCheckId);
QDOP_DECLARE_ERROR(PreconditionViolated);
QDOP_DECLARE_ERROR(NoWitnessWithinBound);
QDOP_DECLARE_ERROR(ConstructionFailed);
// Raised when an internal consistency check fails; maps to exit code 3.
QDOP_DECLARE_ERROR(InvariantBreach);

#undef QDOP_DECLARE_ERROR

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace qdop
