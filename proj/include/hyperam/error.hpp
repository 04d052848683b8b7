#pragma once

#include <stdexcept>
#include <string>

namespace hyperam {

enum class ErrorCode {
  InvalidArgument,
  DuplicateBranchPoint,
  EvenCount,
  NonRealBranchPoint,
  UnclassifiableSigns,
  EmptyAdmissibleRange,
  DegenerateSynthesis,
  UnsupportedGenus,
  OutsideAdmissibleRange,
  SingularInterior,
  NoConvergence,
  WrongGenus,
  UnclassifiedChart,
  InversionFailure,
  DegenerateDivisor,
  NonRealVelocity,
  StepFailure,
  PeriodMismatch,
  GridTooCoarse,
  PhaseUnwrapFailure,
  NearSingularTimeMix,
};

const char* to_string(ErrorCode code);

// Every failure carries the "<module>.<op>" that raised it so the CLI can
// print structured diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string where, const std::string& message)
      : std::runtime_error(message), code_(code), where_(std::move(where)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::string where_;
};

}  // namespace hyperam
