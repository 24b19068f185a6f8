#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iontrap {

enum class ErrorCode {
  InvalidArgument = 1,
  Config,
  Domain,
  BoundaryBreach,
  StepUnderflow,
  TruncationInsufficient,
  DimensionCap,
  NormDrift,
  Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by the Fock oracle when the coherent-state tail does not fit.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t suggested)
      : Error(ErrorCode::TruncationInsufficient, what), suggested_(suggested) {}

  std::size_t suggested_dimension() const noexcept { return suggested_; }

 private:
  std::size_t suggested_;
};

}  // namespace iontrap
