#pragma once

#include <stdexcept>
#include <string>

namespace rqtraj {

enum class ErrorCode {
  DegenerateEnergy,
  WrongRegime,
  InvalidConstants,
  BasisDegenerate,
  DegeneratePath,
  SignChange,
  RootBracketFailure,
  IntegrationFailure,
  WronskianDrift,
  ZeroMomentum,
  ZeroVelocity,
  SingularTime,
  OutOfDomain,
  ConfigError,
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateEnergy: return "DegenerateEnergy";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::InvalidConstants: return "InvalidConstants";
    case ErrorCode::BasisDegenerate: return "BasisDegenerate";
    case ErrorCode::DegeneratePath: return "DegeneratePath";
    case ErrorCode::SignChange: return "SignChange";
    case ErrorCode::RootBracketFailure: return "RootBracketFailure";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::WronskianDrift: return "WronskianDrift";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::ZeroVelocity: return "ZeroVelocity";
    case ErrorCode::SingularTime: return "SingularTime";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

// Every failure the library can signal carries one of the codes above, so
// callers (and the CLI) can map failures to messages and exit codes without
// string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rqtraj
