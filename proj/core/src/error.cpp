#include "qgraph/error.hpp"

namespace qgraph {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::LoopEdge: return "LoopEdge";
    case ErrorCode::ParallelEdge: return "ParallelEdge";
    case ErrorCode::DegreeBelowTwo: return "DegreeBelowTwo";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::SingularLambda: return "SingularLambda";
    case ErrorCode::ScanResolutionTooCoarse: return "ScanResolutionTooCoarse";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::NotUnitSpeed: return "NotUnitSpeed";
    case ErrorCode::EigSolverFailure: return "EigSolverFailure";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::BasisTooSmall: return "BasisTooSmall";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::NonuniformNodeWeight: return "NonuniformNodeWeight";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace qgraph
