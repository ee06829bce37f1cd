#pragma once

#include <stdexcept>
#include <string>

namespace crosscov {

enum class ErrorKind {
  NotConvex,
  CollinearTriple,
  TooFewVertices,
  ZeroArea,
  FaceNotOnPolygon,
  BadResolution,
  OracleInconsistent,
  HypothesisViolated,
  AssemblyFailed,
  BadParams,
  InvalidCone,
  ParseError,
  FileError,
};

inline const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::CollinearTriple: return "CollinearTriple";
    case ErrorKind::TooFewVertices: return "TooFewVertices";
    case ErrorKind::ZeroArea: return "ZeroArea";
    case ErrorKind::FaceNotOnPolygon: return "FaceNotOnPolygon";
    case ErrorKind::BadResolution: return "BadResolution";
    case ErrorKind::OracleInconsistent: return "OracleInconsistent";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::AssemblyFailed: return "AssemblyFailed";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::InvalidCone: return "InvalidCone";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FileError: return "FileError";
  }
  return "Unknown";
}

/// Domain error raised by every module; `kind()` names the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace crosscov
