#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rscreen/generating.hpp"
#include "rscreen/model.hpp"
#include "rscreen/types.hpp"

namespace rscreen {

// Coefficients of the averaged field at k1_hat = 0 for the 1:2 resonance:
//
//   h0(A) = (-alpha A1C - beta A1S + mu,
//             beta A1C - alpha A1S,
//            -gamma A2C - sigma A2S,
//             sigma A2C - gamma A2S)
//
// Normalized by 1/T, i.e. the period mean of the standard-form field.
// Multiply by the period to get the per-period (integrated) values.
struct AveragedCoeffs {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double sigma = 0.0;
  double mu = 0.0;

  // alpha > 0 and gamma > 0: the rest point of h0 is a stable focus/node.
  bool decay_condition() const { return alpha > 0.0 && gamma > 0.0; }
  AveragedCoeffs scaled(double factor) const;
};

using AveragedField = std::function<Vec4(const Amplitudes&)>;

// Standard-form right-hand side A' = eps * standard_rhs(t, A, eps): the
// scaled perturbation pulled back through Omega(t)^-1 at the generating state
// Omega(t) A.
Vec4 standard_rhs(double t, const Amplitudes& a, double eps, const ScreenParams& p,
                  const GeneratingBasis& b);

// Relative displacement x1 - x2 along the generating solution Omega(t) A,
// and its time derivative.
double switching_function(double t, const Amplitudes& a, const GeneratingBasis& b);
double switching_slope(double t, const Amplitudes& a, const GeneratingBasis& b);

// One stretch of a period on which the stop is engaged (switching function
// positive). t_on lies in [0, T); t_off lies in (t_on, t_on + T).
struct SwitchingInterval {
  double t_on = 0.0;
  double t_off = 0.0;
};

struct SwitchingScan {
  std::vector<double> zeros;  // sorted, in [0, T)
  std::vector<SwitchingInterval> intervals;
  double min_slope = 0.0;  // smallest |slope| over the zeros
};

// Zeros of the switching function on [0, T): sign scan on 4096 samples, then
// bisection to 1e-12. No sign change yields an empty scan. Throws
// TangentialCrossing if a zero is not simple or the function vanishes on a
// subinterval, InvalidArgument for A = 0.
SwitchingScan switching_times(const Amplitudes& a, const GeneratingBasis& b);

// Period mean of standard_rhs(., A, 0), integrated piecewise between the
// switching times with composite Gauss-Legendre.
Vec4 average_numeric(const Amplitudes& a, const ScreenParams& p, const GeneratingBasis& b);

// Closed-form coefficients for l = 2 at the parameters' frequencies.
AveragedCoeffs coefficients(const ScreenParams& p, const GeneratingBasis& b);

Vec4 h0_closed(const Amplitudes& a, const AveragedCoeffs& c);

// Zero of h0_closed. Throws DegenerateCoefficients if alpha = beta = 0.
Amplitudes analytic_zero(const AveragedCoeffs& c);

AveragedField closed_field(const AveragedCoeffs& c);
AveragedField numeric_field(const ScreenParams& p, const GeneratingBasis& b);

struct NewtonOptions {
  double tolerance = 1e-10;
  int max_iterations = 50;
  double relative_step = 1e-6;
};

struct NewtonResult {
  Amplitudes zero;
  int iterations = 0;
  double residual = 0.0;
};

// Central differences with step relative_step * (1 + |A|).
Mat4 fd_jacobian(const AveragedField& field, const Amplitudes& a, double relative_step = 1e-6);

// Newton iteration with a finite-difference Jacobian. Throws NoConvergence
// or SingularJacobian.
NewtonResult newton_zero(const AveragedField& field, const Amplitudes& init,
                         const NewtonOptions& opts = {});

struct StabilityCertificate {
  Amplitudes zero;
  Mat4 jacobian;
  std::array<std::complex<double>, 4> eigenvalues;  // ascending real part
  bool stable = false;                             // all real parts < 0
  double residual = 0.0;                           // |field(zero)|

  double max_real_part() const;
};

// Asymptotic stability here means every Jacobian eigenvalue has a negative
// real part. Throws InvalidArgument if A is not a zero of the field to
// 1e-10 (1 + |A|).
StabilityCertificate stability_certificate(const AveragedField& field, const Amplitudes& a);

struct ContinuationPoint {
  double k1_hat = 0.0;
  Amplitudes zero;
  StabilityCertificate certificate;
  double min_switch_slope = 0.0;  // 0 when the stop never engages

  // |(A2C, A2S)|, the second-harmonic content of the averaged orbit.
  double second_mode_norm() const;
};

struct ContinuationResult {
  std::vector<ContinuationPoint> points;
  std::optional<double> failed_k1;  // first grid value where Newton failed
  std::string failure;
};

// Follows the zero of the averaged field on the uniform grid
// k1_hat = k1_max * i / steps, i = 0..steps, seeding each Newton solve with
// the previous zero. Stops at the first failure and reports it. Throws if
// the base point itself cannot be solved.
ContinuationResult continue_zero(const ScreenParams& p, const GeneratingBasis& b, double k1_max,
                                 int steps);

struct Condition {
  std::string name;
  std::string relation;  // "<", "=", "!=", ">"
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct ConditionReport {
  std::vector<Condition> conditions;

  bool all_hold() const;
  const Condition* find(const std::string& name) const;
};

// m1 m2 omega^2 != k0 (m1 + m2) to relative tolerance 1e-9.
Condition stop_nondegeneracy(double m1, double m2, double omega, double k0);

// Bounded generating flow, internal resonance at ratio l, drive period,
// averaged decay (alpha > 0, gamma > 0) and the stop nondegeneracy
// m1 m2 omega^2 != k0_bar (m1 + m2).
ConditionReport check_nondegeneracy(const ScreenParams& p);

}  // namespace rscreen
