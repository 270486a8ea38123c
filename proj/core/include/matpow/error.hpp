#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace matpow {

enum class ErrorCode {
  CompositeModulus,
  OutOfRange,
  ZeroElement,
  WrongDegree,
  FieldMismatch,
  UnsupportedDimension,
  OrderCapExceeded,
  ZeroVector,
  NormNotOne,
  BudgetExceeded,
  ZeroXi1,
  ZeroLambda,
  DegenerateParameters,
  SingularLowerLeft,
  EvenModulus,
  NonRealObservable,
  DependentVectors,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the harness) can branch on the kind without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an operation's estimated work exceeds its cap.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& op, double estimated, double cap)
      : Error(ErrorCode::BudgetExceeded,
              op + " needs ~" + std::to_string(estimated) + " work units, cap " + std::to_string(cap)),
        estimated_(estimated),
        cap_(cap) {}

  double estimated() const noexcept { return estimated_; }
  double cap() const noexcept { return cap_; }

 private:
  double estimated_;
  double cap_;
};

}  // namespace matpow
