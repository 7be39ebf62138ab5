#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tfa {

// Stable numeric codes; mirrored by tfa_status in tfa.h.
enum class ErrorCode : int {
  Parse = 1,
  Precision = 2,
  DepthExhausted = 3,
  Hypothesis = 4,
  Domain = 5,
  CapExceeded = 6,
  TerminalInput = 7,
  UnresolvedCase = 8,
  BudgetInfeasible = 9,
  SampleInExceptionalSet = 10,
  ClampBreach = 11,
  InternalConsistency = 12,
  Usage = 13,
};

const char* errorCodeName(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::Parse, what) {}
};

// Raised whenever an enclosure is too wide to decide a comparison, a floor,
// or a circle reduction. Callers retry at higher working precision.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what, int suggestedDigits = 0)
      : Error(ErrorCode::Precision, what), suggestedDigits_(suggestedDigits) {}
  int suggestedDigits() const noexcept { return suggestedDigits_; }

 private:
  int suggestedDigits_;
};

class DepthExhaustedError : public Error {
 public:
  DepthExhaustedError(const std::string& what, std::size_t validDepth)
      : Error(ErrorCode::DepthExhausted, what), validDepth_(validDepth) {}
  std::size_t validDepth() const noexcept { return validDepth_; }

 private:
  std::size_t validDepth_;
};

enum class HypothesisKind { Window, Separation, Admissibility, Configuration };

class HypothesisError : public Error {
 public:
  HypothesisError(HypothesisKind kind, const std::string& what)
      : Error(ErrorCode::Hypothesis, what), kind_(kind) {}
  HypothesisKind kind() const noexcept { return kind_; }

 private:
  HypothesisKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class CapExceededError : public Error {
 public:
  explicit CapExceededError(const std::string& what)
      : Error(ErrorCode::CapExceeded, what) {}
};

class TerminalInputError : public Error {
 public:
  explicit TerminalInputError(const std::string& what)
      : Error(ErrorCode::TerminalInput, what) {}
};

class UnresolvedCaseError : public Error {
 public:
  explicit UnresolvedCaseError(const std::string& what)
      : Error(ErrorCode::UnresolvedCase, what) {}
};

class BudgetInfeasibleError : public Error {
 public:
  explicit BudgetInfeasibleError(const std::string& what)
      : Error(ErrorCode::BudgetInfeasible, what) {}
};

class SampleInExceptionalSetError : public Error {
 public:
  explicit SampleInExceptionalSetError(const std::string& what)
      : Error(ErrorCode::SampleInExceptionalSet, what) {}
};

class ClampBreachError : public Error {
 public:
  ClampBreachError(const std::string& what, long long index)
      : Error(ErrorCode::ClampBreach, what), index_(index) {}
  long long index() const noexcept { return index_; }

 private:
  long long index_;
};

class InternalConsistencyError : public Error {
 public:
  explicit InternalConsistencyError(const std::string& what)
      : Error(ErrorCode::InternalConsistency, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCode::Usage, what) {}
};

}  // namespace tfa
