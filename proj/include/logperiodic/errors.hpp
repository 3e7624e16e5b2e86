#pragma once

#include <stdexcept>
#include <string>

namespace logperiodic {

enum class ErrorCode {
  Format,
  EmptyInput,
  DuplicateTimestamp,
  InsufficientData,
  Domain,
  PhaseDomain,
  SingularityGuard,
  DegenerateDesign,
  NoFit,
  RefinementFailed,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace logperiodic
