#include "tfa/errors.hpp"

namespace tfa {

const char* errorCodeName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Precision: return "PrecisionError";
    case ErrorCode::DepthExhausted: return "DepthExhaustedError";
    case ErrorCode::Hypothesis: return "HypothesisError";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::CapExceeded: return "CapExceededError";
    case ErrorCode::TerminalInput: return "TerminalInputError";
    case ErrorCode::UnresolvedCase: return "UnresolvedCaseError";
    case ErrorCode::BudgetInfeasible: return "BudgetInfeasibleError";
    case ErrorCode::SampleInExceptionalSet: return "SampleInExceptionalSetError";
    case ErrorCode::ClampBreach: return "ClampBreachError";
    case ErrorCode::InternalConsistency: return "InternalConsistencyError";
    case ErrorCode::Usage: return "UsageError";
  }
  return "UnknownError";
}

}  // namespace tfa
