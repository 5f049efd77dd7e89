#include "nodal/errors.hpp"

namespace nodal {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegreeOutOfRange: return "degree-out-of-range";
    case ErrorCode::IndexTooSmall: return "index-too-small";
    case ErrorCode::NonfiniteInput: return "nonfinite-input";
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::GridTooCoarse: return "grid-too-coarse";
    case ErrorCode::EmptyRow: return "empty-row";
    case ErrorCode::InconsistentRhs: return "inconsistent-rhs";
    case ErrorCode::AllModesDegenerate: return "all-modes-degenerate";
    case ErrorCode::ScaleOverflow: return "scale-overflow";
    case ErrorCode::ModeOutOfRange: return "mode-out-of-range";
    case ErrorCode::UnsupportedMatrix: return "unsupported-matrix";
    case ErrorCode::QuadratureNonConvergence: return "quadrature-non-convergence";
    case ErrorCode::DivergentParameters: return "divergent-parameters";
    case ErrorCode::SingularRegularBlock: return "singular-regular-block";
    case ErrorCode::SolvabilityViolation: return "solvability-violation";
    case ErrorCode::SampleOutsideRegion: return "sample-outside-region";
    case ErrorCode::WeightPrecondition: return "weight-precondition";
    case ErrorCode::BudgetExhausted: return "budget-exhausted";
    case ErrorCode::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace nodal
