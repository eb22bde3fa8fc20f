#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

/// Failure categories raised by the library. The CLI maps ParseError and
/// UnknownField to exit code 2 and every other code to exit code 1.
enum class ErrorCode {
  // graph validation
  Disconnected,
  LoopEdge,
  ParallelEdge,
  DegreeBelowTwo,
  NonpositiveWeight,
  UnknownVertex,
  DuplicateId,
  // graph file parsing
  ParseError,
  UnknownField,
  // spectral
  SingularLambda,
  ScanResolutionTooCoarse,
  KernelMismatch,
  NotUnitSpeed,
  // oracle
  EigSolverFailure,
  SingularStep,
  // evolution
  BasisTooSmall,
  DegenerateSeries,
  // stability
  NotRegular,
  NonuniformNodeWeight,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace qgraph
