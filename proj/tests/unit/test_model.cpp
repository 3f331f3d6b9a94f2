#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rscreen/errors.hpp"
#include "rscreen/generating.hpp"
#include "rscreen/model.hpp"

using namespace rscreen;

namespace {

const double kOmega = std::sqrt(5.0) / 4.0;

PhysState random_state(std::mt19937_64& rng, double box) {
  std::uniform_real_distribution<double> u(-box, box);
  return {u(rng), u(rng), u(rng), u(rng)};
}

ScreenParams detuned_with_stop() {
  ScreenParams p;
  p.k1_hat = 25.0;
  p.k0_tilde = 0.7;
  p.k2_tilde = -1.3;
  return p;
}

}  // namespace

TEST_CASE("ramp examples and identities") {
  CHECK(ramp(0.0) == 0.0);
  CHECK(ramp(-3.5) == 0.0);
  CHECK(ramp(2.25) == 2.25);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    CHECK(ramp(x) >= 0.0);
    CHECK(std::abs(ramp(x) - ramp(y)) <= std::abs(x - y));
    CHECK(ramp(x) - ramp(-x) == doctest::Approx(x).epsilon(1e-15));
  }
}

TEST_CASE("drive is r cos(omega t)") {
  const ScreenParams p;
  CHECK(drive(0.0, p, kOmega) == 10.0);
  CHECK(std::abs(drive(std::numbers::pi / (2 * kOmega), p, kOmega)) < 1e-12);
  CHECK(drive(2 * std::numbers::pi / kOmega, p, kOmega) == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("full_rhs examples") {
  ScreenParams unforced;
  unforced.r = 0.0;
  CHECK(full_rhs(1.234, {}, unforced, kOmega).norm() == 0.0);

  ScreenParams linear;
  linear.eps = 0.0;
  const Vec4 a = full_rhs(0.0, {1, 0, 0, 0}, linear, kOmega);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == 0.0);
  CHECK(a[2] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(a[3] == doctest::Approx(11.0 / 64.0).epsilon(1e-15));

  const Vec4 b = full_rhs(0.0, {1, 2, 0, 0}, linear, kOmega);
  CHECK(b[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b[3] == doctest::Approx(-61.0 / 64.0).epsilon(1e-15));
}

TEST_CASE("perturbation_force examples") {
  const ScreenParams p;
  const Vec2 quiet = perturbation_force(std::numbers::pi / (2 * kOmega), {}, p, kOmega);
  CHECK(quiet.norm() < 1e-12);

  const Vec2 peak = perturbation_force(0.0, {}, p, kOmega);
  CHECK(peak[0] == 10.0);
  CHECK(peak[1] == -10.0);

  ScreenParams stop;
  stop.r = 0.0;
  stop.k1_hat = 25.0;
  const Vec2 f = perturbation_force(0.3, {1, 0, 0, 0}, stop, kOmega);
  CHECK(f[0] == -25.0);
  CHECK(f[1] == 25.0);
}

TEST_CASE("at eps = 0 full_rhs is the generating field") {
  ScreenParams p = detuned_with_stop();
  p.eps = 0.0;
  const GeneratingBasis b = GeneratingBasis::from_params(p);
  const Mat4 c = b.generator();

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const PhysState s = random_state(rng, 3.0);
    const Vec4 dq = c * to_phase(s, p);
    const Vec4 expected(dq[0], dq[1], dq[2] / p.m1, dq[3] / p.m2);
    CHECK((full_rhs(0.7 * i, s, p, kOmega) - expected).norm() <= 1e-12);
  }
}

TEST_CASE("first-order expansion error decays quadratically in eps") {
  const ScreenParams base = detuned_with_stop();
  const StiffnessMatrix m = stiffness_matrix(base);

  auto max_error = [&](double eps) {
    const ScreenParams p = base.with_eps(eps);
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const PhysState s = random_state(rng, 1.0);
      const double t = 0.05 * i;
      const Vec4 rhs = full_rhs(t, s, p, kOmega);
      const Vec2 f0 = perturbation_force(t, s, p, kOmega);
      const double mx1 = m.a11 * s.x1 + m.a12 * s.x2;
      const double mx2 = m.a21 * s.x1 + m.a22 * s.x2;
      worst = std::max(worst, std::abs(rhs[2] - (-mx1 + eps * f0[0]) / p.m1));
      worst = std::max(worst, std::abs(rhs[3] - (-mx2 + eps * f0[1]) / p.m2));
    }
    return worst;
  };

  const double e2 = max_error(1e-2);
  const double e3 = max_error(1e-3);
  const double e4 = max_error(1e-4);
  CHECK(e2 > 0.0);
  CHECK(e2 / e3 == doctest::Approx(100.0).epsilon(0.3));
  CHECK(e3 / e4 == doctest::Approx(100.0).epsilon(0.3));
}

TEST_CASE("momentum form agrees with the equations of motion") {
  const ScreenParams p = detuned_with_stop().with_eps(0.05);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const PhysState s = random_state(rng, 2.0);
    const double t = 0.37 * i;
    const PhaseVector q = to_phase(s, p);

    const PhysState back = from_phase(q, p);
    CHECK((back.as_vector() - s.as_vector()).norm() <= 1e-13);

    // y_i = m_i v_i +- eps P(d), so y_i' = m_i x_i'' +- eps P'(d) d'.
    const Vec4 dq = momentum_rhs(t, q, p, kOmega);
    const Vec4 ds = full_rhs(t, s, p, kOmega);
    const double d = s.x1 - s.x2;
    const double stop_rate = d > 0.0 ? p.eps * p.eps * p.k1_hat * (s.v1 - s.v2) : 0.0;
    CHECK(dq[0] == doctest::Approx(s.v1).epsilon(1e-13));
    CHECK(dq[1] == doctest::Approx(s.v2).epsilon(1e-13));
    CHECK(std::abs(dq[2] - (p.m1 * ds[2] + stop_rate)) <= 1e-11);
    CHECK(std::abs(dq[3] - (p.m2 * ds[3] - stop_rate)) <= 1e-11);

    // Generating operator plus eps times the exact scaled perturbation.
    const Mat4 c = GeneratingBasis::from_params(p).generator();
    CHECK((dq - (c * q + p.eps * scaled_perturbation(t, q, p, kOmega))).norm() <= 1e-11);
  }
}

TEST_CASE("scaled perturbation reduces to F0 at eps = 0") {
  const ScreenParams p = detuned_with_stop().with_eps(0.0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const PhysState s = random_state(rng, 2.0);
    const Vec4 g = scaled_perturbation(0.2 * i, to_phase(s, p), p, kOmega);
    const Vec2 f0 = perturbation_force(0.2 * i, s, p, kOmega);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == doctest::Approx(f0[0]).epsilon(1e-13));
    CHECK(g[3] == doctest::Approx(f0[1]).epsilon(1e-13));
  }
}

TEST_CASE("momentum field is Lipschitz; velocity field jumps at the stop") {
  const ScreenParams p = detuned_with_stop().with_eps(0.01);
  const double k0 = p.k0_bar + p.eps * std::abs(p.k0_tilde);
  const double k2 = p.k2_bar + p.eps * std::abs(p.k2_tilde);
  const double inv_m = 1.0 / std::min(p.m1, p.m2);
  // Row-sum bound on the piecewise-constant Jacobian of momentum_rhs.
  const double lipschitz =
      4.0 * (inv_m + 2.0 * (k0 + k2 + p.eps * p.k1_hat) * (1.0 + p.eps * inv_m) * (1.0 + inv_m));

  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const PhaseVector q = random_state(rng, 5.0).as_vector();
    const PhaseVector r = random_state(rng, 5.0).as_vector();
    const double t = 0.1 * i;
    const double lhs = (momentum_rhs(t, q, p, kOmega) - momentum_rhs(t, r, p, kOmega)).norm();
    CHECK(lhs <= lipschitz * (q - r).norm());
  }

  // Straddle x1 = x2 with a relative velocity.
  const PhysState below{-1e-12, 0.0, 1.0, 0.0};
  const PhysState above{1e-12, 0.0, 1.0, 0.0};
  const double jump = full_rhs(0.0, above, p, kOmega)[2] - full_rhs(0.0, below, p, kOmega)[2];
  CHECK(jump == doctest::Approx(-p.eps * p.eps * p.k1_hat / p.m1).epsilon(1e-6));
  const double smooth = (momentum_rhs(0.0, to_phase(above, p), p, kOmega) -
                         momentum_rhs(0.0, to_phase(below, p), p, kOmega))
                            .norm();
  CHECK(smooth < 1e-9);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ScreenParams{}.validate());
  ScreenParams bad;
  bad.m1 = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ScreenParams{};
  bad.eps = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ScreenParams{};
  bad.k1_hat = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ScreenParams{};
  bad.r = std::nan("");
  try {
    bad.validate();
    FAIL("expected InvalidParams");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParams);
  }
}
