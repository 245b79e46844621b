#pragma once

#include <stdexcept>
#include <string>

namespace vacpol {

enum class ErrorCode {
  MaxIterExceeded,
  Degenerate,
  ChargeUnreachable,
  LandauPoleViolation,
  NonlinearRegime,
  FitIllConditioned,
  DegenerateMasses,
  MaxOuterExceeded,
  BoundaryStall,
  ParseError,
  ValidationError,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::ChargeUnreachable: return "ChargeUnreachable";
    case ErrorCode::LandauPoleViolation: return "LandauPoleViolation";
    case ErrorCode::NonlinearRegime: return "NonlinearRegime";
    case ErrorCode::FitIllConditioned: return "FitIllConditioned";
    case ErrorCode::DegenerateMasses: return "DegenerateMasses";
    case ErrorCode::MaxOuterExceeded: return "MaxOuterExceeded";
    case ErrorCode::BoundaryStall: return "BoundaryStall";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Configuration text could not be parsed at all.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A parsed value failed a range or consistency check; names the offending key.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& key, const std::string& what)
      : Error(ErrorCode::ValidationError, key + ": " + what), key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace vacpol
