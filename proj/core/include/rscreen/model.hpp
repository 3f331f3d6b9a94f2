#pragma once

#include "rscreen/types.hpp"

namespace rscreen {

// Physical constants of the two-mass screen with a one-sided elastic stop.
//
// The full stiffnesses are k0 = k0_bar + eps * k0_tilde and
// k2 = k2_bar + eps * k2_tilde. The stop force is eps * k1_hat * max(0, x1 - x2)
// and the motor excitation enters as k0_bar * eta(t) = eps * r * cos(omega t).
// Defaults are the reference 1:2 resonant configuration (stop disengaged).
struct ScreenParams {
  double m1 = 11.0;
  double m2 = 64.0;
  double k0_bar = 11.0;
  double k2_bar = 25.0;
  double k0_tilde = 0.0;
  double k2_tilde = 0.0;
  double k1_hat = 0.0;
  double r = 10.0;
  double eps = 0.001;
  int l = 2;

  // Throws Error(InvalidParams) on non-finite or out-of-range values.
  void validate() const;

  ScreenParams with_k1(double k1) const;
  ScreenParams with_eps(double e) const;
};

struct PhysState {
  double x1 = 0.0;
  double x2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;

  Vec4 as_vector() const { return {x1, x2, v1, v2}; }
  static PhysState from_vector(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  double relative_displacement() const { return x1 - x2; }
};

double ramp(double d) noexcept;

// Scaled excitation r * cos(omega t).
double drive(double t, const ScreenParams& p, double omega) noexcept;

// Exact equations of motion in (x, v) form. Returns (x1', x2', x1'', x2'').
// The stop-damping term eps * P'(x1 - x2) * (v1 - v2) jumps by O(eps^2) when
// the stop engages; use momentum_rhs where a Lipschitz field is required.
Vec4 full_rhs(double t, const PhysState& s, const ScreenParams& p, double omega);

// O(eps) force pair F0 with m_i x_i'' = -(M x)_i + eps * F0_i + O(eps^2).
Vec2 perturbation_force(double t, const PhysState& s, const ScreenParams& p, double omega);

// Momenta y1 = m1 v1 + eps * P(x1 - x2), y2 = m2 v2 - eps * P(x1 - x2),
// where P(d) = eps * k1_hat * max(0, d).
PhaseVector to_phase(const PhysState& s, const ScreenParams& p);
PhysState from_phase(const PhaseVector& q, const ScreenParams& p);

// The same equations of motion in momentum coordinates. The stop-damping
// term is absorbed into y, so this field is continuous and globally Lipschitz.
Vec4 momentum_rhs(double t, const PhaseVector& q, const ScreenParams& p, double omega);

// Exact perturbation G(t, q) / eps of the momentum system, i.e.
// momentum_rhs = C q + eps * scaled_perturbation with C the generating
// operator. At eps = 0 it equals (0, 0, F0_1, F0_2) evaluated at v = y / m.
Vec4 scaled_perturbation(double t, const PhaseVector& q, const ScreenParams& p, double omega);

}  // namespace rscreen
