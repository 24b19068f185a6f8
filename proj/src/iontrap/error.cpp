#include "iontrap/error.hpp"

namespace iontrap {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Config: return "config error";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::BoundaryBreach: return "boundary breach";
    case ErrorCode::StepUnderflow: return "step underflow";
    case ErrorCode::TruncationInsufficient: return "truncation insufficient";
    case ErrorCode::DimensionCap: return "dimension cap exceeded";
    case ErrorCode::NormDrift: return "truncation/step failure";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace iontrap
