#include "rscreen/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rscreen/errors.hpp"

namespace rscreen {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidParams, what);
}

// Quantities shared by the equations of motion at one instant.
struct Forcing {
  double k0;       // full coupling stiffness
  double k2;       // full support stiffness
  double eta;      // kinematic excitation, O(eps)
  double eta_dot;  // its time derivative, O(eps)
  double drive;    // r cos(omega t)
};

Forcing forcing_at(double t, const ScreenParams& p, double omega) {
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {
      p.k0_bar + p.eps * p.k0_tilde,
      p.k2_bar + p.eps * p.k2_tilde,
      p.eps * p.r * c / p.k0_bar,
      -p.eps * p.r * omega * s / p.k0_bar,
      p.r * c,
  };
}

}  // namespace

void ScreenParams::validate() const {
  const double all[] = {m1, m2, k0_bar, k2_bar, k0_tilde, k2_tilde, k1_hat, r, eps};
  for (double v : all) require(std::isfinite(v), "parameters must be finite");
  require(m1 > 0.0 && m2 > 0.0, "masses must be positive");
  require(k0_bar > 0.0 && k2_bar > 0.0, "leading stiffnesses must be positive");
  require(k1_hat >= 0.0, "stop stiffness must be non-negative");
  require(r >= 0.0, "drive amplitude must be non-negative");
  require(eps >= 0.0 && eps < 1.0, "eps must lie in [0, 1)");
  require(l >= 1, "resonance ratio must be a positive integer");
}

ScreenParams ScreenParams::with_k1(double k1) const {
  ScreenParams p = *this;
  p.k1_hat = k1;
  return p;
}

ScreenParams ScreenParams::with_eps(double e) const {
  ScreenParams p = *this;
  p.eps = e;
  return p;
}

double ramp(double d) noexcept { return std::max(0.0, d); }

double drive(double t, const ScreenParams& p, double omega) noexcept {
  return p.r * std::cos(omega * t);
}

Vec4 full_rhs(double t, const PhysState& s, const ScreenParams& p, double omega) {
  const Forcing f = forcing_at(t, p, omega);
  const double d = s.x1 - s.x2;
  const double d_dot = s.v1 - s.v2;
  const double stop = p.eps * p.k1_hat * ramp(d);
  const double stop_slope = d > 0.0 ? p.eps * p.k1_hat : 0.0;

  const double lhs1 = p.eps * stop_slope * d_dot - p.eps * f.k0 * (f.eta_dot - d_dot) + stop -
                      f.k0 * (f.eta - d);
  const double lhs2 = -p.eps * stop_slope * d_dot + p.eps * f.k2 * s.v2 +
                      p.eps * f.k0 * (f.eta_dot - d_dot) - stop + f.k2 * s.x2 + f.k0 * (f.eta - d);
  return {s.v1, s.v2, -lhs1 / p.m1, -lhs2 / p.m2};
}

Vec2 perturbation_force(double t, const PhysState& s, const ScreenParams& p, double omega) {
  const double d = s.x1 - s.x2;
  const double d_dot = s.v1 - s.v2;
  const double coupling = p.k1_hat * ramp(d) + p.k0_tilde * d + p.k0_bar * d_dot;
  const double eta = drive(t, p, omega);
  return {-coupling + eta, coupling - eta - p.k2_tilde * s.x2 - p.k2_bar * s.v2};
}

PhaseVector to_phase(const PhysState& s, const ScreenParams& p) {
  const double stop = p.eps * p.k1_hat * ramp(s.x1 - s.x2);
  return {s.x1, s.x2, p.m1 * s.v1 + p.eps * stop, p.m2 * s.v2 - p.eps * stop};
}

PhysState from_phase(const PhaseVector& q, const ScreenParams& p) {
  const double stop = p.eps * p.k1_hat * ramp(q[0] - q[1]);
  return {q[0], q[1], (q[2] - p.eps * stop) / p.m1, (q[3] + p.eps * stop) / p.m2};
}

Vec4 momentum_rhs(double t, const PhaseVector& q, const ScreenParams& p, double omega) {
  const Forcing f = forcing_at(t, p, omega);
  const PhysState s = from_phase(q, p);
  const double d = s.x1 - s.x2;
  const double d_dot = s.v1 - s.v2;
  const double stop = p.eps * p.k1_hat * ramp(d);

  const double y1_dot = p.eps * f.k0 * (f.eta_dot - d_dot) - stop + f.k0 * (f.eta - d);
  const double y2_dot = -p.eps * f.k2 * s.v2 - p.eps * f.k0 * (f.eta_dot - d_dot) + stop -
                        f.k2 * s.x2 - f.k0 * (f.eta - d);
  return {s.v1, s.v2, y1_dot, y2_dot};
}

Vec4 scaled_perturbation(double t, const PhaseVector& q, const ScreenParams& p, double omega) {
  const Forcing f = forcing_at(t, p, omega);
  const PhysState s = from_phase(q, p);
  const double d = s.x1 - s.x2;
  const double d_dot = s.v1 - s.v2;
  const double stop = p.eps * p.k1_hat * ramp(d);
  const double drive_term = f.k0 / p.k0_bar * f.drive;

  // k0 (eta_dot - d_dot) collects both the viscous coupling and the O(eps)
  // excitation-rate term.
  const double g3 = f.k0 * (f.eta_dot - d_dot) - p.k1_hat * ramp(d) + drive_term - p.k0_tilde * d;
  const double g4 = -f.k2 * s.v2 - f.k0 * (f.eta_dot - d_dot) + p.k1_hat * ramp(d) -
                    p.k2_tilde * s.x2 + p.k0_tilde * d - drive_term;
  return {-stop / p.m1, stop / p.m2, g3, g4};
}

}  // namespace rscreen
