#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

enum class ErrorCode {
  DegreeOutOfRange,
  IndexTooSmall,
  NonfiniteInput,
  InvalidDimension,
  GridTooCoarse,
  EmptyRow,
  InconsistentRhs,
  AllModesDegenerate,
  ScaleOverflow,
  ModeOutOfRange,
  UnsupportedMatrix,
  QuadratureNonConvergence,
  DivergentParameters,
  SingularRegularBlock,
  SolvabilityViolation,
  SampleOutsideRegion,
  WeightPrecondition,
  BudgetExhausted,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Numerical or contract failure raised by every module of the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a right-hand side violates one of the Fredholm conditions of a
/// block solve. `condition` names the violated dot product.
class SolvabilityError : public Error {
 public:
  SolvabilityError(std::string condition, double magnitude)
      : Error(ErrorCode::SolvabilityViolation,
              condition + " = " + std::to_string(magnitude)),
        condition_(std::move(condition)),
        magnitude_(magnitude) {}

  const std::string& condition() const noexcept { return condition_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  std::string condition_;
  double magnitude_;
};

}  // namespace nodal
