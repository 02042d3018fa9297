#pragma once

#include <stdexcept>
#include <string>

namespace purgeom {

// Validation errors mean the input violates a stated precondition; numerical
// errors mean the computation could not be carried out reliably.
enum class ErrorKind { Validation, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(const std::string& what)
      : Error(ErrorKind::Validation, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what)
      : Error(ErrorKind::Numerical, what) {}
};

// clang-format off
class NonHermitianInput    : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class MissingBoundaryValue : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class UnsolvableSupport    : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class BasePointMismatch    : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class NotSelftransposed    : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class ExceedsBuresBound    : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class NotCyclic            : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class PureLimitUndefined   : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class ParseError           : public ValidationFailure { using ValidationFailure::ValidationFailure; };
class ValidationError      : public ValidationFailure { using ValidationFailure::ValidationFailure; };

class DomainError          : public NumericalFailure { using NumericalFailure::NumericalFailure; };
class RankDeficient        : public NumericalFailure { using NumericalFailure::NumericalFailure; };
class RankChanged          : public NumericalFailure { using NumericalFailure::NumericalFailure; };
class StepTooLarge         : public NumericalFailure { using NumericalFailure::NumericalFailure; };
// clang-format on

}  // namespace purgeom
