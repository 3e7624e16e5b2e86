#include "logperiodic/errors.hpp"

namespace logperiodic {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Format: return "format error";
    case ErrorCode::EmptyInput: return "empty input";
    case ErrorCode::DuplicateTimestamp: return "duplicate timestamp";
    case ErrorCode::InsufficientData: return "insufficient data";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::PhaseDomain: return "phase domain error";
    case ErrorCode::SingularityGuard: return "singularity guard";
    case ErrorCode::DegenerateDesign: return "degenerate design";
    case ErrorCode::NoFit: return "no fit";
    case ErrorCode::RefinementFailed: return "refinement failed";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace logperiodic
