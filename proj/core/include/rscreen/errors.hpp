#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rscreen {

enum class ErrorKind {
  InvalidParams,
  InvalidArgument,
  ResonanceDegenerate,
  NotOscillatory,
  NoRealSolution,
  SingularBasis,
  TangentialCrossing,
  DegenerateCoefficients,
  NoConvergence,
  SingularJacobian,
  StepTooLarge,
  BadSampling,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All numeric failures in the library are reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rscreen
