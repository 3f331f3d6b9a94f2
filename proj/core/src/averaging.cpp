#include "rscreen/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss.hpp>

#include "rscreen/errors.hpp"

namespace rscreen {

namespace {

constexpr int kScanSamples = 4096;
constexpr double kBisectionTolerance = 1e-12;
constexpr double kSimpleZeroSlope = 1e-9;
constexpr int kPanelsPerPiece = 32;

using GaussRule = boost::math::quadrature::gauss<double, 10>;

// Bisection for a sign change of f on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  for (int i = 0; i < 200 && hi - lo > kBisectionTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Composite Gauss-Legendre of standard_rhs(., A, 0) over [lo, hi].
Vec4 integrate_piece(const Amplitudes& a, const ScreenParams& p, const GeneratingBasis& b,
                     double lo, double hi) {
  const auto& nodes = GaussRule::abscissa();
  const auto& weights = GaussRule::weights();
  const double panel = (hi - lo) / kPanelsPerPiece;
  const double half = 0.5 * panel;
  Vec4 sum = Vec4::Zero();
  for (int k = 0; k < kPanelsPerPiece; ++k) {
    const double mid = lo + (k + 0.5) * panel;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] == 0.0) {
        sum += weights[i] * standard_rhs(mid, a, 0.0, p, b);
        continue;
      }
      sum += weights[i] * (standard_rhs(mid - half * nodes[i], a, 0.0, p, b) +
                           standard_rhs(mid + half * nodes[i], a, 0.0, p, b));
    }
  }
  return half * sum;
}

}  // namespace

AveragedCoeffs AveragedCoeffs::scaled(double factor) const {
  return {factor * alpha, factor * beta, factor * gamma, factor * sigma, factor * mu};
}

Vec4 standard_rhs(double t, const Amplitudes& a, double eps, const ScreenParams& p,
                  const GeneratingBasis& b) {
  const ScreenParams at_eps = p.with_eps(eps);
  const PhaseVector q = b.from_amplitudes(t, a);
  return b.solve(t, scaled_perturbation(t, q, at_eps, b.omega1()));
}

double switching_function(double t, const Amplitudes& a, const GeneratingBasis& b) {
  const double a12 = b.stiffness().a12;
  const double w1 = b.omega1();
  const double w2 = b.omega2();
  return (a12 - b.mode_shape(1)) * (a[0] * std::sin(w1 * t) + a[1] * std::cos(w1 * t)) +
         (a12 - b.mode_shape(2)) * (a[2] * std::sin(w2 * t) + a[3] * std::cos(w2 * t));
}

double switching_slope(double t, const Amplitudes& a, const GeneratingBasis& b) {
  const double a12 = b.stiffness().a12;
  const double w1 = b.omega1();
  const double w2 = b.omega2();
  return (a12 - b.mode_shape(1)) * w1 * (a[0] * std::cos(w1 * t) - a[1] * std::sin(w1 * t)) +
         (a12 - b.mode_shape(2)) * w2 * (a[2] * std::cos(w2 * t) - a[3] * std::sin(w2 * t));
}

SwitchingScan switching_times(const Amplitudes& a, const GeneratingBasis& b) {
  const double norm = a.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::InvalidArgument, "switching scan needs A != 0");

  const double period = b.period();
  const double dt = period / kScanSamples;
  auto xi = [&](double t) { return switching_function(t, a, b); };
  auto slope = [&](double t) { return switching_slope(t, a, b); };

  std::vector<double> values(kScanSamples + 1);
  double peak = 0.0;
  for (int j = 0; j < kScanSamples; ++j) {
    values[j] = xi(j * dt);
    peak = std::max(peak, std::abs(values[j]));
  }
  values[kScanSamples] = values[0];

  const double scale = norm * std::max(std::abs(b.stiffness().a12 - b.mode_shape(1)),
                                       std::abs(b.stiffness().a12 - b.mode_shape(2)));
  if (peak <= 1e-12 * scale) {
    throw Error(ErrorKind::TangentialCrossing, "switching function vanishes identically");
  }

  SwitchingScan scan;
  for (int j = 0; j < kScanSamples; ++j) {
    const double lo = j * dt;
    const double v0 = values[j];
    const double v1 = values[j + 1];
    if (v0 == 0.0) {
      scan.zeros.push_back(lo);
    } else if ((v0 < 0.0) != (v1 < 0.0) && v1 != 0.0) {
      scan.zeros.push_back(bisect(xi, lo, lo + dt, v0));
    } else {
      // No sign change on this cell. A local extremum of the switching
      // function may still dip through zero between samples.
      const double s_lo = slope(lo);
      const double s_hi = slope(lo + dt);
      if ((s_lo < 0.0) == (s_hi < 0.0) || s_lo == 0.0) continue;
      const double t_ext = bisect(slope, lo, lo + dt, s_lo);
      const double v_ext = xi(t_ext);
      if (std::abs(v_ext) <= kSimpleZeroSlope * norm) {
        throw Error(ErrorKind::TangentialCrossing, "switching function touches zero");
      }
      if ((v_ext < 0.0) != (v0 < 0.0)) {
        scan.zeros.push_back(bisect(xi, lo, t_ext, v0));
        scan.zeros.push_back(bisect(xi, t_ext, lo + dt, v_ext));
      }
    }
  }
  std::sort(scan.zeros.begin(), scan.zeros.end());

  scan.min_slope = scan.zeros.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  std::vector<double> slopes;
  slopes.reserve(scan.zeros.size());
  for (double z : scan.zeros) {
    const double s = slope(z);
    if (std::abs(s) <= kSimpleZeroSlope * norm) {
      throw Error(ErrorKind::TangentialCrossing, "non-transversal switching zero");
    }
    slopes.push_back(s);
    scan.min_slope = std::min(scan.min_slope, std::abs(s));
  }

  const std::size_t n = scan.zeros.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (slopes[i] <= 0.0) continue;
    const std::size_t next = (i + 1) % n;
    double off = scan.zeros[next];
    if (next <= i) off += period;
    scan.intervals.push_back({scan.zeros[i], off});
  }
  return scan;
}

Vec4 average_numeric(const Amplitudes& a, const ScreenParams& p, const GeneratingBasis& b) {
  const double period = b.period();
  std::vector<double> breaks{0.0};
  if (p.k1_hat != 0.0 && a.norm() > 0.0) {
    for (double z : switching_times(a, b).zeros) {
      if (z > breaks.back()) breaks.push_back(z);
    }
  }
  if (breaks.back() < period) breaks.push_back(period);

  Vec4 sum = Vec4::Zero();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    sum += integrate_piece(a, p, b, breaks[i], breaks[i + 1]);
  }
  return sum / period;
}

AveragedCoeffs coefficients(const ScreenParams& p, const GeneratingBasis& b) {
  const double w = b.omega1();
  const double w2 = w * w;
  const double w3 = w2 * w;
  const double w4 = w2 * w2;
  const double m12 = p.m1 * p.m2;
  const double k0 = p.k0_bar;
  const double k2 = p.k2_bar;
  const double kt0 = p.k0_tilde;
  const double kt2 = p.k2_tilde;

  AveragedCoeffs c;
  c.alpha = w / 6.0 * (k0 * k2 / (m12 * w3) - k0 / (p.m1 * w) - (k0 + k2) / (p.m2 * w) + 4.0 * w);
  c.beta = w / 6.0 *
           (4.0 * kt0 / k0 + k0 * kt2 / (m12 * w4) - kt0 / (p.m1 * w2) - (kt0 + kt2) / (p.m2 * w2));
  c.gamma = w / 6.0 *
            (4.0 * k0 / (p.m1 * w) + 4.0 * k0 / (p.m2 * w) + 4.0 * k2 / (p.m2 * w) -
             k0 * k2 / (m12 * w3) - 4.0 * w);
  c.sigma = w / 6.0 *
            (2.0 * kt0 / (p.m1 * w2) + 2.0 * kt0 / (p.m2 * w2) + 2.0 * kt2 / (p.m2 * w2) -
             2.0 * kt0 / k0 - k0 * kt2 / (2.0 * m12 * w4));
  c.mu = (1.0 / p.m1 + 1.0 / p.m2) * p.r / (6.0 * p.m1 * w3) - 2.0 * p.r / (3.0 * k0 * p.m1 * w);
  return c;
}

Vec4 h0_closed(const Amplitudes& a, const AveragedCoeffs& c) {
  return {-c.alpha * a[0] - c.beta * a[1] + c.mu, c.beta * a[0] - c.alpha * a[1],
          -c.gamma * a[2] - c.sigma * a[3], c.sigma * a[2] - c.gamma * a[3]};
}

Amplitudes analytic_zero(const AveragedCoeffs& c) {
  const double den = c.alpha * c.alpha + c.beta * c.beta;
  if (!(den > 0.0)) throw Error(ErrorKind::DegenerateCoefficients, "alpha = beta = 0");
  return {c.mu * c.alpha / den, c.mu * c.beta / den, 0.0, 0.0};
}

AveragedField closed_field(const AveragedCoeffs& c) {
  return [c](const Amplitudes& a) { return h0_closed(a, c); };
}

AveragedField numeric_field(const ScreenParams& p, const GeneratingBasis& b) {
  return [p, b](const Amplitudes& a) { return average_numeric(a, p, b); };
}

Mat4 fd_jacobian(const AveragedField& field, const Amplitudes& a, double relative_step) {
  const double h = relative_step * (1.0 + a.norm());
  Mat4 jac;
  for (int i = 0; i < 4; ++i) {
    Amplitudes up = a;
    Amplitudes down = a;
    up[i] += h;
    down[i] -= h;
    jac.col(i) = (field(up) - field(down)) / (2.0 * h);
  }
  return jac;
}

NewtonResult newton_zero(const AveragedField& field, const Amplitudes& init,
                         const NewtonOptions& opts) {
  Amplitudes a = init;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    const Vec4 f = field(a);
    const double res = f.norm();
    if (!std::isfinite(res)) break;
    if (res <= opts.tolerance) return {a, it, res};
    if (it == opts.max_iterations) break;

    const Mat4 jac = fd_jacobian(field, a, opts.relative_step);
    const Eigen::FullPivLU<Mat4> lu(jac);
    if (!lu.isInvertible() || !(lu.rcond() > 1e-14)) {
      throw Error(ErrorKind::SingularJacobian, "averaged-field Jacobian is singular");
    }
    a -= lu.solve(f);
  }
  throw Error(ErrorKind::NoConvergence, "Newton iteration on the averaged field did not converge");
}

double StabilityCertificate::max_real_part() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues) m = std::max(m, ev.real());
  return m;
}

StabilityCertificate stability_certificate(const AveragedField& field, const Amplitudes& a) {
  StabilityCertificate cert;
  cert.zero = a;
  cert.residual = field(a).norm();
  if (!(cert.residual <= 1e-10 * (1.0 + a.norm()))) {
    throw Error(ErrorKind::InvalidArgument, "point is not a zero of the averaged field");
  }
  cert.jacobian = fd_jacobian(field, a);
  if (!cert.jacobian.allFinite()) {
    throw Error(ErrorKind::SingularJacobian, "non-finite Jacobian");
  }

  const Eigen::EigenSolver<Mat4> solver(cert.jacobian, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularJacobian, "eigenvalue computation failed");
  }
  const double scale = std::max(1.0, cert.jacobian.norm());
  for (int i = 0; i < 4; ++i) {
    cert.eigenvalues[i] = solver.eigenvalues()[i];
    if (std::abs(cert.eigenvalues[i]) <= 1e-12 * scale) {
      throw Error(ErrorKind::SingularJacobian, "zero eigenvalue: the zero is not hyperbolic");
    }
  }
  std::sort(cert.eigenvalues.begin(), cert.eigenvalues.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  cert.stable = cert.max_real_part() < 0.0;
  return cert;
}

double ContinuationPoint::second_mode_norm() const { return std::hypot(zero[2], zero[3]); }

ContinuationResult continue_zero(const ScreenParams& p, const GeneratingBasis& b, double k1_max,
                                 int steps) {
  if (!(k1_max >= 0.0) || steps < 1) {
    throw Error(ErrorKind::InvalidArgument, "continuation needs k1_max >= 0 and steps >= 1");
  }

  auto solve_at = [&](double k1, const Amplitudes& seed) {
    const ScreenParams pk = p.with_k1(k1);
    const AveragedField field = numeric_field(pk, b);
    ContinuationPoint point;
    point.k1_hat = k1;
    point.zero = newton_zero(field, seed).zero;
    point.certificate = stability_certificate(field, point.zero);
    if (k1 > 0.0 && point.zero.norm() > 0.0) {
      point.min_switch_slope = switching_times(point.zero, b).min_slope;
    }
    return point;
  };

  ContinuationResult result;
  result.points.push_back(solve_at(0.0, analytic_zero(coefficients(p, b))));
  if (k1_max == 0.0) return result;

  for (int i = 1; i <= steps; ++i) {
    const double k1 = k1_max * i / steps;
    try {
      result.points.push_back(solve_at(k1, result.points.back().zero));
    } catch (const Error& e) {
      result.failed_k1 = k1;
      result.failure = e.what();
      break;
    }
  }
  return result;
}

bool ConditionReport::all_hold() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const Condition& c) { return c.holds; });
}

const Condition* ConditionReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Condition stop_nondegeneracy(double m1, double m2, double omega, double k0) {
  const double lhs = m1 * m2 * omega * omega;
  const double rhs = k0 * (m1 + m2);
  return {"stop_nondegeneracy", "!=", lhs, rhs,
          std::abs(lhs - rhs) > 1e-9 * std::max(std::abs(lhs), std::abs(rhs))};
}

ConditionReport check_nondegeneracy(const ScreenParams& p) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ConditionReport report;
  const StiffnessMatrix m = stiffness_matrix(p);
  report.conditions.push_back(
      {"bounded_generating_flow", "<", m.a21 * m.a12, m.a11 * m.a22, check_periodicity(m)});

  // l^2 (sum of squared frequencies)^2 = (1 + l^2)^2 (product of squared
  // frequencies) is equivalent to omega2 = l omega1.
  const double l2 = static_cast<double>(p.l) * p.l;
  const double sum_sq = (p.k2_bar + p.k0_bar) / p.m2 + p.k0_bar / p.m1;
  report.conditions.push_back({"internal_resonance", "=", l2 * sum_sq * sum_sq,
                               (1.0 + l2) * (1.0 + l2) * p.k0_bar * p.k2_bar / (p.m1 * p.m2),
                               resonance_check(p, p.l)});

  std::optional<GeneratingBasis> basis;
  try {
    basis.emplace(GeneratingBasis::from_params(p));
  } catch (const Error&) {
  }

  if (!basis) {
    report.conditions.push_back({"drive_period", "=", nan, nan, false});
    report.conditions.push_back({"averaged_decay", ">", nan, 0.0, false});
    report.conditions.push_back({"stop_nondegeneracy", "!=", nan, nan, false});
    return report;
  }

  const double w = basis->omega1();
  // The drive runs at omega1, the lower generating frequency.
  report.conditions.push_back(
      {"drive_period", "=", w, std::min(basis->omega1(), basis->omega2()), true});

  const AveragedCoeffs c = coefficients(p, *basis);
  report.conditions.push_back(
      {"averaged_decay", ">", std::min(c.alpha, c.gamma), 0.0, c.decay_condition()});

  report.conditions.push_back(stop_nondegeneracy(p.m1, p.m2, w, p.k0_bar));
  return report;
}

}  // namespace rscreen
