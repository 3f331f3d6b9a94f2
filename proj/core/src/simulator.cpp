#include "rscreen/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "rscreen/errors.hpp"

namespace rscreen {

namespace {

template <class F>
Vec4 rk4(F&& f, double t, const Vec4& y, double h) {
  const Vec4 k1 = f(t, y);
  const Vec4 k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const Vec4 k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const Vec4 k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Uniform grid t0 + k h, k = 0..full, then one shortened step to t1 if the
// remainder exceeds 1e-9 h (otherwise the last grid point is snapped to t1).
struct StepPlan {
  long full = 0;
  double last = 0.0;
};

StepPlan plan_steps(double t0, double t1, double h) {
  const double span = t1 - t0;
  StepPlan plan;
  plan.full = static_cast<long>(std::floor(span / h * (1.0 + 1e-12)));
  const double remainder = span - plan.full * h;
  plan.last = remainder > 1e-9 * h ? remainder : 0.0;
  return plan;
}

}  // namespace

std::vector<double> Trajectory::component(int index) const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.as_vector()[index]);
  return out;
}

double HarmonicTable::x1_ratio(int k) const { return std::abs(x1.at(k)) / std::abs(x1.at(1)); }

double PeriodicOrbit::max_floquet_modulus() const {
  double m = 0.0;
  for (const auto& z : floquet) m = std::max(m, std::abs(z));
  return m;
}

Simulator::Simulator(const ScreenParams& p, IntegratorOptions opts)
    : params_(p), basis_(GeneratingBasis::from_params(p)), opts_(opts) {}

void Simulator::check_step(double h) const {
  if (!(h > 0.0) || h > period() / 1024.0 * (1.0 + 1e-12)) {
    throw Error(ErrorKind::StepTooLarge, "step must lie in (0, T/1024]");
  }
}

PhaseVector Simulator::step(double t, const PhaseVector& q, double h) const {
  const double w = basis_.omega1();
  return rk4([&](double tt, const Vec4& y) { return momentum_rhs(tt, y, params_, w); }, t, q, h);
}

PhaseVector Simulator::step_localized(double t, const PhaseVector& q, double h) const {
  const PhaseVector end = step(t, q, h);
  const double d0 = q[0] - q[1];
  if ((d0 > 0.0) == (end[0] - end[1] > 0.0)) return end;

  double lo = 0.0;
  double hi = h;
  while (hi - lo > 1e-6 * h) {
    const double mid = 0.5 * (lo + hi);
    const PhaseVector trial = step(t, q, mid);
    if ((trial[0] - trial[1] > 0.0) == (d0 > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double tau = 0.5 * (lo + hi);
  return step(t + tau, step(t, q, tau), h - tau);
}

Trajectory Simulator::integrate(const PhysState& s0, double t0, double t1, double h) const {
  check_step(h);
  if (!(t1 >= t0)) throw Error(ErrorKind::InvalidArgument, "t1 must not precede t0");

  const StepPlan plan = plan_steps(t0, t1, h);
  Trajectory traj;
  traj.step = h;
  traj.times.reserve(plan.full + 2);
  traj.states.reserve(plan.full + 2);

  PhaseVector q = to_phase(s0, params_);
  traj.times.push_back(t0);
  traj.states.push_back(s0);
  for (long k = 0; k < plan.full; ++k) {
    const double t = t0 + k * h;
    q = opts_.localize_switches ? step_localized(t, q, h) : step(t, q, h);
    const bool snap = k + 1 == plan.full && plan.last == 0.0;
    traj.times.push_back(snap ? t1 : t0 + (k + 1) * h);
    traj.states.push_back(from_phase(q, params_));
  }
  if (plan.last > 0.0) {
    const double t = t0 + plan.full * h;
    q = opts_.localize_switches ? step_localized(t, q, plan.last) : step(t, q, plan.last);
    traj.times.push_back(t1);
    traj.states.push_back(from_phase(q, params_));
  }
  return traj;
}

PhysState Simulator::advance(const PhysState& s0, double t0, double t1, double h) const {
  check_step(h);
  if (!(t1 >= t0)) throw Error(ErrorKind::InvalidArgument, "t1 must not precede t0");

  const StepPlan plan = plan_steps(t0, t1, h);
  PhaseVector q = to_phase(s0, params_);
  for (long k = 0; k < plan.full; ++k) {
    const double t = t0 + k * h;
    q = opts_.localize_switches ? step_localized(t, q, h) : step(t, q, h);
  }
  if (plan.last > 0.0) {
    const double t = t0 + plan.full * h;
    q = opts_.localize_switches ? step_localized(t, q, plan.last) : step(t, q, plan.last);
  }
  return from_phase(q, params_);
}

PhysState Simulator::poincare(const PhysState& s, double h) const {
  return advance(s, 0.0, period(), h);
}

Trajectory Simulator::one_period(const PhysState& s, double h) const {
  return integrate(s, 0.0, period(), h);
}

PeriodicOrbit Simulator::find_fixed_point(const PhysState& guess, double h,
                                          const ShootingOptions& opts) const {
  auto monodromy = [&](const Vec4& s, const Vec4& image) {
    const double delta = opts.relative_step * (1.0 + s.norm());
    Mat4 jac;
    for (int i = 0; i < 4; ++i) {
      Vec4 shifted = s;
      shifted[i] += delta;
      jac.col(i) = (poincare(PhysState::from_vector(shifted), h).as_vector() - image) / delta;
    }
    return jac;
  };

  Vec4 s = guess.as_vector();
  for (int it = 0; it <= opts.max_iterations; ++it) {
    const Vec4 image = poincare(PhysState::from_vector(s), h).as_vector();
    const Vec4 defect = image - s;
    if (!defect.allFinite()) break;
    const Mat4 jac = monodromy(s, image);
    const Mat4 shifted = jac - Mat4::Identity();
    const Eigen::JacobiSVD<Mat4> svd(shifted);
    if (!(svd.singularValues()[3] > 1e-7 * std::max(1.0, jac.norm()))) {
      throw Error(ErrorKind::NoConvergence,
                  "monodromy minus identity is singular; the periodic orbit is not isolated");
    }

    if (defect.norm() <= opts.tolerance) {
      PeriodicOrbit orbit;
      orbit.state = PhysState::from_vector(s);
      orbit.period = period();
      orbit.residual = defect.norm();
      orbit.iterations = it;
      const Eigen::EigenSolver<Mat4> solver(jac, false);
      for (int i = 0; i < 4; ++i) orbit.floquet[i] = solver.eigenvalues()[i];
      std::sort(orbit.floquet.begin(), orbit.floquet.end(), [](const auto& a, const auto& b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) > std::abs(b) : a.imag() < b.imag();
      });
      orbit.harmonics = harmonics(one_period(orbit.state, h), basis_.omega1(), opts.harmonics);
      return orbit;
    }
    if (it == opts.max_iterations) break;

    s -= Eigen::PartialPivLU<Mat4>(shifted).solve(defect);
  }
  throw Error(ErrorKind::NoConvergence, "Poincare shooting did not converge");
}

std::vector<std::complex<double>> fourier_harmonics(std::span<const double> times,
                                                    std::span<const double> values, double omega,
                                                    int kmax) {
  const std::size_t n = times.size();
  if (n < 1024 || values.size() != n) {
    throw Error(ErrorKind::BadSampling, "need at least 1024 matching samples");
  }
  if (kmax < 0 || static_cast<std::size_t>(kmax) > n / 2 - 1) {
    throw Error(ErrorKind::BadSampling, "kmax exceeds the Nyquist limit");
  }
  const double dt = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(times[j] - (times[0] + j * dt)) > 1e-6 * dt) {
      throw Error(ErrorKind::BadSampling, "samples are not uniformly spaced");
    }
  }
  const double period = 2.0 * std::numbers::pi / omega;
  if (std::abs(n * dt - period) > 1e-8 * period) {
    throw Error(ErrorKind::BadSampling, "samples do not span exactly one period");
  }

  std::vector<std::complex<double>> out(kmax + 1);
  double mean = 0.0;
  for (double v : values) mean += v;
  out[0] = mean / static_cast<double>(n);
  for (int k = 1; k <= kmax; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += values[j] * std::polar(1.0, -k * omega * times[j]);
    }
    out[k] = 2.0 / static_cast<double>(n) * acc;
  }
  return out;
}

HarmonicTable harmonics(const Trajectory& orbit, double omega, int kmax) {
  std::vector<double> times = orbit.times;
  std::vector<double> x1 = orbit.component(0);
  std::vector<double> x2 = orbit.component(1);
  const double period = 2.0 * std::numbers::pi / omega;
  if (times.size() > 1 && std::abs(times.back() - times.front() - period) <= 1e-8 * period) {
    times.pop_back();
    x1.pop_back();
    x2.pop_back();
  }
  return {fourier_harmonics(times, x1, omega, kmax), fourier_harmonics(times, x2, omega, kmax)};
}

Vec2 AveragedPrediction::operator()(double t) const {
  const Vec4 q = basis_.from_amplitudes(t, a_);
  return {q[0], q[1]};
}

double prediction_gap(const Trajectory& traj, const AveragedPrediction& pred) {
  double gap = 0.0;
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const Vec2 x = pred(traj.times[j]);
    gap = std::max({gap, std::abs(traj.states[j].x1 - x[0]), std::abs(traj.states[j].x2 - x[1])});
  }
  return gap;
}

PhysState averaged_seed(const Amplitudes& a, const GeneratingBasis& b, const ScreenParams& p) {
  return from_phase(b.from_amplitudes(0.0, a), p);
}

}  // namespace rscreen
