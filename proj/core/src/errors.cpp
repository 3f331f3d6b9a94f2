#include "rscreen/errors.hpp"

namespace rscreen {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ResonanceDegenerate: return "ResonanceDegenerate";
    case ErrorKind::NotOscillatory: return "NotOscillatory";
    case ErrorKind::NoRealSolution: return "NoRealSolution";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::TangentialCrossing: return "TangentialCrossing";
    case ErrorKind::DegenerateCoefficients: return "DegenerateCoefficients";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::BadSampling: return "BadSampling";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace rscreen
