#pragma once

#include <Eigen/Core>

#include "rscreen/model.hpp"
#include "rscreen/types.hpp"

namespace rscreen {

struct StiffnessMatrix {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  Eigen::Matrix2d as_matrix() const {
    Eigen::Matrix2d m;
    m << a11, a12, a21, a22;
    return m;
  }
};

StiffnessMatrix stiffness_matrix(const ScreenParams& p);

// True iff a21 * a12 < a11 * a22, i.e. every solution of the undamped
// linear system is bounded and oscillatory.
bool check_periodicity(const StiffnessMatrix& m);

struct FrequencyPair {
  double omega1 = 0.0;  // lower
  double omega2 = 0.0;  // upper
};

// Natural frequencies of m x'' + M x = 0, ordered omega1 < omega2.
// Throws NotOscillatory if a squared root of the characteristic quartic is
// non-negative or complex, ResonanceDegenerate if the two coincide.
FrequencyPair eigenfrequencies(const StiffnessMatrix& m, double m1, double m2);

// |omega2 - l * omega1| <= 1e-9 * omega1. False when no basis exists.
bool resonance_check(const ScreenParams& p, int l);

// Support stiffness k2_bar that places the screen on the omega2 = l * omega1
// resonance. Throws NoRealSolution when the radicand is negative.
double k2_for_resonance(double m1, double m2, double k0_bar, int l);

// Fundamental matrix of the undamped system in (x1, x2, y1, y2) coordinates.
//
// Column pairs (sin, cos) per mode i, with s_i = -a11 + m1 * omega_i^2:
//   x1 = a12 * sin,  x2 = s_i * sin,  y1 = m1 omega_i a12 * cos,
//   y2 = m2 omega_i s_i * cos
// and the analogous cosine column. Immutable once constructed.
class GeneratingBasis {
 public:
  GeneratingBasis(const StiffnessMatrix& m, double m1, double m2);

  static GeneratingBasis from_params(const ScreenParams& p);

  const StiffnessMatrix& stiffness() const { return stiffness_; }
  double omega1() const { return omega1_; }
  double omega2() const { return omega2_; }
  double m1() const { return m1_; }
  double m2() const { return m2_; }

  // Drive and averaging period 2 pi / omega1.
  double period() const { return period_; }

  // -a11 + m1 * omega_i^2 for mode i in {1, 2}; the x2 row coefficient.
  double mode_shape(int mode) const;

  Mat4 omega(double t) const;
  Mat4 omega_derivative(double t) const;

  // Partial-pivot LU inverse. Throws SingularBasis on a near-singular matrix.
  Mat4 omega_inverse(double t) const;

  // Omega(t)^-1 * rhs without forming the inverse.
  Vec4 solve(double t, const Vec4& rhs) const;

  Amplitudes to_amplitudes(double t, const PhaseVector& q) const { return solve(t, q); }
  PhaseVector from_amplitudes(double t, const Amplitudes& a) const { return omega(t) * a; }

  // C with q' = C q for the undamped system.
  Mat4 generator() const;

 private:
  StiffnessMatrix stiffness_;
  double m1_;
  double m2_;
  double omega1_;
  double omega2_;
  double period_;
};

}  // namespace rscreen
