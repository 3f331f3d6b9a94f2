#include "rscreen/generating.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "rscreen/errors.hpp"

namespace rscreen {

namespace {

constexpr double kResonanceTolerance = 1e-9;
constexpr double kMinReciprocalCondition = 1e-13;

}  // namespace

StiffnessMatrix stiffness_matrix(const ScreenParams& p) {
  return {p.k0_bar, -p.k0_bar, -p.k0_bar, p.k0_bar + p.k2_bar};
}

bool check_periodicity(const StiffnessMatrix& m) { return m.a21 * m.a12 < m.a11 * m.a22; }

FrequencyPair eigenfrequencies(const StiffnessMatrix& m, double m1, double m2) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "masses must be positive");

  // Roots in lambda^2 of lambda^4 + s lambda^2 + q = 0.
  const double s = m.a22 / m2 + m.a11 / m1;
  const double q = (m.a11 * m.a22 - m.a21 * m.a12) / (m1 * m2);
  const double diff = m.a22 / m2 - m.a11 / m1;
  const double disc = diff * diff + 4.0 * m.a21 * m.a12 / (m1 * m2);
  if (!(disc >= 0.0)) throw Error(ErrorKind::NotOscillatory, "complex characteristic roots");

  const double root = std::sqrt(disc);
  if (root <= 1e-14 * std::abs(s)) {
    throw Error(ErrorKind::ResonanceDegenerate, "coincident eigenfrequencies");
  }
  // The deeper root has no cancellation; recover the other from the product q.
  const double lambda2_sq = -0.5 * (s + root);
  if (!(lambda2_sq < 0.0) || !(q > 0.0)) {
    throw Error(ErrorKind::NotOscillatory, "non-negative squared characteristic root");
  }
  const double lambda1_sq = q / lambda2_sq;
  return {std::sqrt(-lambda1_sq), std::sqrt(-lambda2_sq)};
}

bool resonance_check(const ScreenParams& p, int l) {
  try {
    const FrequencyPair f = eigenfrequencies(stiffness_matrix(p), p.m1, p.m2);
    return std::abs(f.omega2 - l * f.omega1) <= kResonanceTolerance * f.omega1;
  } catch (const Error&) {
    return false;
  }
}

double k2_for_resonance(double m1, double m2, double k0_bar, int l) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "resonance ratio must be positive");
  const double l2 = static_cast<double>(l) * l;
  const double radicand = (1.0 - l2) * (1.0 - l2) - 4.0 * l2 * (m1 / m2);
  if (radicand < 0.0) throw Error(ErrorKind::NoRealSolution, "negative radicand");
  const double root = (1.0 + l2) - std::sqrt(radicand);
  return k0_bar * (m2 / m1) * root * root / (4.0 * l2);
}

GeneratingBasis::GeneratingBasis(const StiffnessMatrix& m, double m1, double m2)
    : stiffness_(m), m1_(m1), m2_(m2) {
  if (!check_periodicity(m)) {
    throw Error(ErrorKind::NotOscillatory, "stiffness matrix violates a21 a12 < a11 a22");
  }
  if (m.a12 == 0.0) throw Error(ErrorKind::SingularBasis, "a12 must be non-zero");
  const FrequencyPair f = eigenfrequencies(m, m1, m2);
  omega1_ = f.omega1;
  omega2_ = f.omega2;
  period_ = 2.0 * std::numbers::pi / omega1_;
}

GeneratingBasis GeneratingBasis::from_params(const ScreenParams& p) {
  p.validate();
  return GeneratingBasis(stiffness_matrix(p), p.m1, p.m2);
}

double GeneratingBasis::mode_shape(int mode) const {
  const double w = mode == 1 ? omega1_ : omega2_;
  return -stiffness_.a11 + m1_ * w * w;
}

Mat4 GeneratingBasis::omega(double t) const {
  Mat4 out;
  const double a12 = stiffness_.a12;
  for (int i = 0; i < 2; ++i) {
    const double w = i == 0 ? omega1_ : omega2_;
    const double shape = mode_shape(i + 1);
    const double sn = std::sin(w * t);
    const double cs = std::cos(w * t);
    out.col(2 * i) << a12 * sn, shape * sn, m1_ * w * a12 * cs, m2_ * w * shape * cs;
    out.col(2 * i + 1) << a12 * cs, shape * cs, -m1_ * w * a12 * sn, -m2_ * w * shape * sn;
  }
  return out;
}

Mat4 GeneratingBasis::omega_derivative(double t) const {
  const Mat4 o = omega(t);
  Mat4 out;
  out.col(0) = omega1_ * o.col(1);
  out.col(1) = -omega1_ * o.col(0);
  out.col(2) = omega2_ * o.col(3);
  out.col(3) = -omega2_ * o.col(2);
  return out;
}

Mat4 GeneratingBasis::omega_inverse(double t) const {
  const Eigen::PartialPivLU<Mat4> lu(omega(t));
  if (!(lu.rcond() > kMinReciprocalCondition)) {
    throw Error(ErrorKind::SingularBasis, "fundamental matrix is numerically singular");
  }
  return lu.inverse();
}

Vec4 GeneratingBasis::solve(double t, const Vec4& rhs) const {
  const Eigen::PartialPivLU<Mat4> lu(omega(t));
  if (!(lu.rcond() > kMinReciprocalCondition)) {
    throw Error(ErrorKind::SingularBasis, "fundamental matrix is numerically singular");
  }
  return lu.solve(rhs);
}

Mat4 GeneratingBasis::generator() const {
  Mat4 c = Mat4::Zero();
  c(0, 2) = 1.0 / m1_;
  c(1, 3) = 1.0 / m2_;
  c(2, 0) = -stiffness_.a11;
  c(2, 1) = -stiffness_.a12;
  c(3, 0) = -stiffness_.a21;
  c(3, 1) = -stiffness_.a22;
  return c;
}

}  // namespace rscreen
