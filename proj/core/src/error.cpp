#include "matpow/error.hpp"

namespace matpow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::CompositeModulus: return "CompositeModulus";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::WrongDegree: return "WrongDegree";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NormNotOne: return "NormNotOne";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroXi1: return "ZeroXi1";
    case ErrorCode::ZeroLambda: return "ZeroLambda";
    case ErrorCode::DegenerateParameters: return "DegenerateParameters";
    case ErrorCode::SingularLowerLeft: return "SingularLowerLeft";
    case ErrorCode::EvenModulus: return "EvenModulus";
    case ErrorCode::NonRealObservable: return "NonRealObservable";
    case ErrorCode::DependentVectors: return "DependentVectors";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace matpow
