#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "rscreen/generating.hpp"
#include "rscreen/model.hpp"
#include "rscreen/types.hpp"

namespace rscreen {

struct Trajectory {
  std::vector<double> times;
  std::vector<PhysState> states;
  double step = 0.0;

  std::vector<double> component(int index) const;  // 0..3 = x1, x2, v1, v2
};

struct IntegratorOptions {
  // Split steps at x1 = x2 crossings (located by bisection to step * 1e-6)
  // so each RK4 substep sees a smooth field.
  bool localize_switches = false;
};

// c_k for k = 0..kmax. c_0 is the mean, c_k = (2/N) sum x_j exp(-i k omega t_j).
struct HarmonicTable {
  std::vector<std::complex<double>> x1;
  std::vector<std::complex<double>> x2;

  // |c_k(x1)| / |c_1(x1)|
  double x1_ratio(int k) const;
};

struct PeriodicOrbit {
  PhysState state;  // on the orbit at t = 0 (mod T)
  double period = 0.0;
  double residual = 0.0;  // |P(state) - state|
  std::array<std::complex<double>, 4> floquet;
  HarmonicTable harmonics;
  int iterations = 0;

  double max_floquet_modulus() const;
  bool stable() const { return max_floquet_modulus() < 1.0; }
};

struct ShootingOptions {
  double tolerance = 1e-8;
  int max_iterations = 30;
  double relative_step = 1e-6;
  int harmonics = 4;
};

// Fixed-step classical RK4 for the screen equations. The field is integrated
// in momentum form, where it is Lipschitz, and reported as PhysState.
class Simulator {
 public:
  explicit Simulator(const ScreenParams& p, IntegratorOptions opts = {});

  const ScreenParams& params() const { return params_; }
  const GeneratingBasis& basis() const { return basis_; }
  double period() const { return basis_.period(); }
  double default_step() const { return basis_.period() / 8192.0; }

  // Samples at t0 + k h plus a final shortened step landing on t1.
  // Throws StepTooLarge for h > T / 1024.
  Trajectory integrate(const PhysState& s0, double t0, double t1, double h) const;

  // Same integration without recording samples.
  PhysState advance(const PhysState& s0, double t0, double t1, double h) const;

  // Stroboscopic map over one drive period starting at phase 0.
  PhysState poincare(const PhysState& s, double h) const;

  // Newton shooting on s -> poincare(s) - s with a forward-difference
  // monodromy. Throws NoConvergence, including when the monodromy minus
  // identity is singular (every point fixed, e.g. eps = 0).
  PeriodicOrbit find_fixed_point(const PhysState& guess, double h,
                                 const ShootingOptions& opts = {}) const;

  // Orbit samples over exactly one period starting at t = 0.
  Trajectory one_period(const PhysState& s, double h) const;

 private:
  void check_step(double h) const;
  PhaseVector step(double t, const PhaseVector& q, double h) const;
  PhaseVector step_localized(double t, const PhaseVector& q, double h) const;

  ScreenParams params_;
  GeneratingBasis basis_;
  IntegratorOptions opts_;
};

// Uniformly sampled values over exactly one period of 2 pi / omega, without
// the duplicated endpoint. Throws BadSampling for N < 1024, non-uniform
// spacing, a span other than one period, or kmax > N / 2 - 1.
std::vector<std::complex<double>> fourier_harmonics(std::span<const double> times,
                                                    std::span<const double> values, double omega,
                                                    int kmax);

// Accepts a one-period trajectory with or without its closing sample.
HarmonicTable harmonics(const Trajectory& orbit, double omega, int kmax);

// t -> (x1, x2) = (Omega_1(t) A, Omega_2(t) A), the leading-order orbit
// predicted by a zero A of the averaged field.
class AveragedPrediction {
 public:
  AveragedPrediction(const Amplitudes& a, const GeneratingBasis& b) : a_(a), basis_(b) {}

  Vec2 operator()(double t) const;
  const Amplitudes& amplitudes() const { return a_; }

 private:
  Amplitudes a_;
  GeneratingBasis basis_;
};

// max over samples of max(|x1 - x1_pred|, |x2 - x2_pred|).
double prediction_gap(const Trajectory& traj, const AveragedPrediction& pred);

// Phase-0 state on the averaged orbit, the default shooting seed.
PhysState averaged_seed(const Amplitudes& a, const GeneratingBasis& b, const ScreenParams& p);

}  // namespace rscreen
