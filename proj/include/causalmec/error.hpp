#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalmec {

enum class ErrorCode {
  VertexOutOfRange,
  SelfLoop,
  CycleInAcyclicKind,
  BidirectedInWrongKind,
  CyclicInput,
  InvalidQuery,
  GraphTooLarge,
  GraphTooLargeForOracle,
  SizeMismatch,
  NotADag,
  NotAnAdmg,
  NotADcg,
  EnumerationCapExceeded,
  InvalidMatching,
  TripleNotAnSStructure,
  NotACycle,
  CycleTooShort,
  InvalidTowerVector,
  InvalidP,
  RejectionBudgetExceeded,
  ParseError,
  SuiteFailed,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::CycleInAcyclicKind: return "CycleInAcyclicKind";
    case ErrorCode::BidirectedInWrongKind: return "BidirectedInWrongKind";
    case ErrorCode::CyclicInput: return "CyclicInput";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::GraphTooLarge: return "GraphTooLarge";
    case ErrorCode::GraphTooLargeForOracle: return "GraphTooLargeForOracle";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NotADag: return "NotADag";
    case ErrorCode::NotAnAdmg: return "NotAnAdmg";
    case ErrorCode::NotADcg: return "NotADcg";
    case ErrorCode::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorCode::InvalidMatching: return "InvalidMatching";
    case ErrorCode::TripleNotAnSStructure: return "TripleNotAnSStructure";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::CycleTooShort: return "CycleTooShort";
    case ErrorCode::InvalidTowerVector: return "InvalidTowerVector";
    case ErrorCode::InvalidP: return "InvalidP";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SuiteFailed: return "SuiteFailed";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace causalmec
