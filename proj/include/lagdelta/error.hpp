#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lagdelta {

enum class ErrorCode {
  IndexOutOfRange,
  ConflictingEntry,
  DimensionMismatch,
  EqualIndices,
  InadmissiblePartition,
  RankDeficient,
  NotApplicable,
  EmptyList,
  BadBlockIndex,
  CaseMismatch,
  InvariantViolation,
  SingularMetric,
  ParseError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ConflictingEntry: return "ConflictingEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EqualIndices: return "EqualIndices";
    case ErrorCode::InadmissiblePartition: return "InadmissiblePartition";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::BadBlockIndex: return "BadBlockIndex";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace lagdelta
