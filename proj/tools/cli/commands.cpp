#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "rscreen/averaging.hpp"
#include "rscreen/errors.hpp"
#include "rscreen/generating.hpp"
#include "rscreen/simulator.hpp"

namespace rscreen::cli {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

class Report {
 public:
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, num(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add(const std::string& key, const Vec4& v) {
    add(key, fmt::format("{} {} {} {}", num(v[0]), num(v[1]), num(v[2]), num(v[3])));
  }
  void add(const std::string& key, std::complex<double> z) {
    add(key, fmt::format("{} {}", num(z.real()), num(z.imag())));
  }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : lines_) fmt::print(out, "{} {}\n", k, v);
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

// Writes through `write` to cfg.output if set, else to out.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot open output: " + path);
  write(file);
  file.flush();
  if (!file) throw ConfigError("write failed: " + path);
}

void add_params(Report& r, const ScreenParams& p) {
  r.add("m1", p.m1);
  r.add("m2", p.m2);
  r.add("k0_bar", p.k0_bar);
  r.add("k2_bar", p.k2_bar);
  r.add("k0_tilde", p.k0_tilde);
  r.add("k2_tilde", p.k2_tilde);
  r.add("k1_hat", p.k1_hat);
  r.add("r", p.r);
  r.add("eps", p.eps);
  r.add("l", p.l);
}

struct AverageOutcome {
  AveragedCoeffs coeffs;
  Amplitudes analytic;
  NewtonResult newton;
  StabilityCertificate certificate;
};

AverageOutcome run_average(const RunConfig& cfg, const GeneratingBasis& b) {
  const ScreenParams& p = cfg.params;
  AverageOutcome o;
  o.coeffs = coefficients(p, b);
  o.analytic = analytic_zero(o.coeffs);
  const AveragedField field = numeric_field(p, b);
  o.newton = newton_zero(field, cfg.seed.value_or(o.analytic));
  o.certificate = stability_certificate(field, o.newton.zero);
  return o;
}

void add_average(Report& r, const AverageOutcome& o, double period) {
  const AveragedCoeffs& c = o.coeffs;
  const AveragedCoeffs t = c.scaled(period);
  r.add("alpha", c.alpha);
  r.add("beta", c.beta);
  r.add("gamma", c.gamma);
  r.add("sigma", c.sigma);
  r.add("mu", c.mu);
  r.add("alpha_per_period", t.alpha);
  r.add("beta_per_period", t.beta);
  r.add("gamma_per_period", t.gamma);
  r.add("sigma_per_period", t.sigma);
  r.add("mu_per_period", t.mu);
  r.add("analytic_zero", o.analytic);
  r.add("zero", o.newton.zero);
  r.add("zero_residual", o.newton.residual);
  r.add("newton_iterations", o.newton.iterations);
  r.add("second_mode_norm", std::hypot(o.newton.zero[2], o.newton.zero[3]));
  for (int i = 0; i < 4; ++i) r.add(fmt::format("eigenvalue.{}", i), o.certificate.eigenvalues[i]);
  r.add("max_real_eigenvalue", o.certificate.max_real_part());
  r.add("stable", o.certificate.stable);
}

bool conditions_hold(const RunConfig& cfg) { return check_nondegeneracy(cfg.params).all_hold(); }

double step_for(const RunConfig& cfg, const Simulator& sim) { return cfg.step.value_or(sim.default_step()); }

struct OrbitOutcome {
  AverageOutcome average;
  PeriodicOrbit orbit;
  Trajectory one_period;
  double gap = 0.0;
};

OrbitOutcome run_orbit(const RunConfig& cfg) {
  const Simulator sim(cfg.params);
  OrbitOutcome o;
  o.average = run_average(cfg, sim.basis());
  const double h = step_for(cfg, sim);
  o.orbit = sim.find_fixed_point(averaged_seed(o.average.newton.zero, sim.basis(), cfg.params), h);
  o.one_period = sim.one_period(o.orbit.state, h);
  o.gap = prediction_gap(o.one_period, AveragedPrediction(o.average.newton.zero, sim.basis()));
  return o;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void add_orbit(Report& r, const OrbitOutcome& o) {
  const PeriodicOrbit& orbit = o.orbit;
  r.add("period", orbit.period);
  r.add("fixed_point", orbit.state.as_vector());
  r.add("residual", orbit.residual);
  r.add("shooting_iterations", orbit.iterations);
  for (int i = 0; i < 4; ++i) {
    r.add(fmt::format("floquet.{}", i), orbit.floquet[i]);
    r.add(fmt::format("floquet_modulus.{}", i), std::abs(orbit.floquet[i]));
  }
  r.add("max_floquet_modulus", orbit.max_floquet_modulus());
  r.add("orbit_stable", orbit.stable());
  for (std::size_t k = 0; k < orbit.harmonics.x1.size(); ++k) {
    r.add(fmt::format("harmonic.x1.{}", k), orbit.harmonics.x1[k]);
  }
  for (std::size_t k = 0; k < orbit.harmonics.x2.size(); ++k) {
    r.add(fmt::format("harmonic.x2.{}", k), orbit.harmonics.x2[k]);
  }
  r.add("ratio_c2_c1_x1", orbit.harmonics.x1_ratio(2));
  r.add("max_abs_x1", max_abs(o.one_period.component(0)));
  r.add("max_abs_x2", max_abs(o.one_period.component(1)));
  r.add("prediction_gap", o.gap);
}

void write_csv(std::ostream& out, const Trajectory& traj, int thin) {
  fmt::print(out, "t,x1,x2,v1,v2\n");
  for (std::size_t j = 0; j < traj.times.size(); j += static_cast<std::size_t>(thin)) {
    const PhysState& s = traj.states[j];
    fmt::print(out, "{},{},{},{},{}\n", num(traj.times[j]), num(s.x1), num(s.x2), num(s.v1), num(s.v2));
  }
}

// Leading-order waveform coefficients x = a sin + b cos at w and 2 w.
void add_reconstruction(Report& r, const Amplitudes& a, const GeneratingBasis& b) {
  const AveragedPrediction pred(a, b);
  const int n = 1024;
  std::vector<double> times(n);
  std::vector<double> x1(n);
  std::vector<double> x2(n);
  for (int j = 0; j < n; ++j) {
    times[j] = b.period() * j / n;
    const Vec2 x = pred(times[j]);
    x1[j] = x[0];
    x2[j] = x[1];
  }
  const auto c1 = fourier_harmonics(times, x1, b.omega1(), 2);
  const auto c2 = fourier_harmonics(times, x2, b.omega1(), 2);
  for (int k = 1; k <= 2; ++k) {
    r.add(fmt::format("x1.sin{}", k), -c1[k].imag());
    r.add(fmt::format("x1.cos{}", k), c1[k].real());
    r.add(fmt::format("x2.sin{}", k), -c2[k].imag());
    r.add(fmt::format("x2.cos{}", k), c2[k].real());
  }
}

}  // namespace

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const ScreenParams& p = cfg.params;
  Report r;
  add_params(r, p);
  const StiffnessMatrix m = stiffness_matrix(p);
  r.add("a11", m.a11);
  r.add("a12", m.a12);
  r.add("a21", m.a21);
  r.add("a22", m.a22);
  try {
    const FrequencyPair f = eigenfrequencies(m, p.m1, p.m2);
    r.add("omega1", f.omega1);
    r.add("omega2", f.omega2);
    r.add("period", 2.0 * std::numbers::pi / f.omega1);
    r.add("frequency_ratio", f.omega2 / f.omega1);
  } catch (const Error& e) {
    r.add("frequencies", std::string(to_string(e.kind())));
  }
  const ConditionReport report = check_nondegeneracy(p);
  for (const Condition& c : report.conditions) {
    r.add(fmt::format("condition.{}", c.name),
          fmt::format("{} {} {} {}", num(c.lhs), c.relation, num(c.rhs), c.holds ? "true" : "false"));
  }
  r.add("all_conditions_hold", report.all_hold());
  emit(cfg.output, out, [&](std::ostream& o) { r.write(o); });
  return report.all_hold() ? kOk : kNumericFailure;
}

int cmd_average(const RunConfig& cfg, std::ostream& out) {
  if (!conditions_hold(cfg)) {
    fmt::print(out, "error conditions_violated\n");
    return kNumericFailure;
  }
  const GeneratingBasis b = GeneratingBasis::from_params(cfg.params);
  const AverageOutcome o = run_average(cfg, b);
  Report r;
  add_params(r, cfg.params);
  add_average(r, o, b.period());
  r.write(out);
  if (!cfg.output.empty()) emit(cfg.output, out, [&](std::ostream& f) { r.write(f); });
  return o.certificate.stable ? kOk : kNumericFailure;
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
  if (!conditions_hold(cfg)) {
    fmt::print(out, "error conditions_violated\n");
    return kNumericFailure;
  }
  const OrbitOutcome o = run_orbit(cfg);
  Report r;
  add_params(r, cfg.params);
  r.add("zero", o.average.newton.zero);
  add_orbit(r, o);
  r.write(out);
  if (!cfg.output.empty()) emit(cfg.output, out, [&](std::ostream& f) { r.write(f); });
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Simulator sim(cfg.params);
  const double t_end = cfg.t_end.value_or(10.0 * sim.period());
  const Trajectory traj = sim.integrate(cfg.initial.value_or(PhysState{}), 0.0, t_end, step_for(cfg, sim));
  emit(cfg.output, out, [&](std::ostream& o) { write_csv(o, traj, cfg.thin); });
  return kOk;
}

int cmd_continue(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!conditions_hold(cfg)) {
    fmt::print(err, "error conditions_violated\n");
    return kNumericFailure;
  }
  const GeneratingBasis b = GeneratingBasis::from_params(cfg.params);
  const int steps = cfg.k1_max == 0.0 ? 1 : cfg.steps;
  const ContinuationResult path = continue_zero(cfg.params, b, cfg.k1_max, steps);
  emit(cfg.output, out, [&](std::ostream& o) {
    fmt::print(o, "k1_hat,A1C,A1S,A2C,A2S,max_re_eig\n");
    for (const ContinuationPoint& pt : path.points) {
      fmt::print(o, "{},{},{},{},{},{}\n", num(pt.k1_hat), num(pt.zero[0]), num(pt.zero[1]),
                 num(pt.zero[2]), num(pt.zero[3]), num(pt.certificate.max_real_part()));
    }
  });
  if (path.failed_k1) {
    fmt::print(err, "continuation stopped at k1_hat {}: {}\n", num(*path.failed_k1), path.failure);
    return path.points.size() <= 1 && cfg.k1_max > 0.0 ? kNumericFailure : kOk;
  }
  return kOk;
}

int cmd_reproduce(const std::string& scenario, const RunConfig& cfg, std::ostream& out) {
  RunConfig c = cfg;
  if (scenario == "prop3") {
    const GeneratingBasis b = GeneratingBasis::from_params(c.params);
    const AverageOutcome o = run_average(c, b);
    Report r;
    r.add("scenario", scenario);
    r.add("k1_hat", c.params.k1_hat);
    r.add("zero", o.newton.zero);
    add_reconstruction(r, o.newton.zero, b);
    r.add("second_mode_norm", std::hypot(o.newton.zero[2], o.newton.zero[3]));
    r.add("stable", o.certificate.stable);
    r.write(out);
    return o.certificate.stable ? kOk : kNumericFailure;
  }
  if (scenario != "fig2-left" && scenario != "fig2-right") {
    throw ConfigError("unknown scenario: " + scenario);
  }
  c.params.k1_hat = scenario == "fig2-left" ? 0.0 : 25.0;
  const OrbitOutcome o = run_orbit(c);
  const Simulator sim(c.params);
  const double t_end = c.t_end.value_or(10.0 * sim.period());
  const Trajectory traj = sim.integrate(o.orbit.state, 0.0, t_end, step_for(c, sim));

  std::vector<double> d;
  for (const PhysState& s : o.one_period.states) d.push_back(s.relative_displacement());
  d.pop_back();
  std::vector<double> times(o.one_period.times.begin(), o.one_period.times.end() - 1);
  const auto cd = fourier_harmonics(times, d, sim.basis().omega1(), 2);

  Report r;
  r.add("scenario", scenario);
  r.add("k1_hat", c.params.k1_hat);
  r.add("eps", c.params.eps);
  r.add("residual", o.orbit.residual);
  r.add("max_floquet_modulus", o.orbit.max_floquet_modulus());
  r.add("orbit_stable", o.orbit.stable());
  r.add("ratio_c2_c1_x1", o.orbit.harmonics.x1_ratio(2));
  r.add("ratio_c2_c1_relative", std::abs(cd[2]) / std::abs(cd[1]));
  r.add("max_abs_x1", max_abs(o.one_period.component(0)));
  r.add("max_abs_x2", max_abs(o.one_period.component(1)));
  r.add("samples", static_cast<int>(traj.times.size()));
  if (!c.output.empty()) {
    emit(c.output, out, [&](std::ostream& f) { write_csv(f, traj, c.thin); });
    r.add("output", c.output);
  }
  r.write(out);
  return o.orbit.stable() ? kOk : kNumericFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resonant two-mass screen: averaging analysis and simulation", "rscreen"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output;
  std::optional<double> k1;
  std::optional<double> eps;
  std::optional<double> t_end;
  std::optional<double> step;
  std::optional<double> k1_max;
  std::optional<int> steps;
  std::optional<int> thin;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--output", output, "output path");
  app.add_option("--k1", k1, "stop stiffness k1_hat");
  app.add_option("--eps", eps, "perturbation scale");
  app.add_option("--t-end", t_end, "integration end time");
  app.add_option("--step", step, "integration step");
  app.add_option("--k1-max", k1_max, "continuation end point");
  app.add_option("--steps", steps, "continuation grid intervals");
  app.add_option("--thin", thin, "keep every n-th CSV row");

  auto* analyze = app.add_subcommand("analyze", "frequencies and nondegeneracy conditions");
  auto* average = app.add_subcommand("average", "averaged field, zero and stability");
  auto* orbit = app.add_subcommand("orbit", "periodic orbit by Poincare shooting");
  auto* simulate = app.add_subcommand("simulate", "trajectory CSV");
  auto* cont = app.add_subcommand("continue", "continuation of the zero in k1_hat");
  auto* reproduce = app.add_subcommand("reproduce", "named reference scenarios");
  std::string scenario;
  reproduce->add_option("scenario", scenario, "prop3 | fig2-left | fig2-right")
      ->required()
      ->check(CLI::IsMember({"prop3", "fig2-left", "fig2-right"}));
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    fmt::print(err, "usage error: {}\n", e.what());
    return kUsageError;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (output) cfg.output = *output;
    if (k1) cfg.params.k1_hat = *k1;
    if (eps) cfg.params.eps = *eps;
    if (t_end) cfg.t_end = *t_end;
    if (step) cfg.step = *step;
    if (k1_max) cfg.k1_max = *k1_max;
    if (steps) cfg.steps = *steps;
    if (thin) cfg.thin = *thin;
    validate(cfg);

    if (analyze->parsed()) return cmd_analyze(cfg, out);
    if (average->parsed()) return cmd_average(cfg, out);
    if (orbit->parsed()) return cmd_orbit(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (cont->parsed()) return cmd_continue(cfg, out, err);
    if (reproduce->parsed()) return cmd_reproduce(scenario, cfg, out);
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kUsageError;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return e.kind() == ErrorKind::InvalidParams || e.kind() == ErrorKind::StepTooLarge ? kUsageError
                                                                                       : kNumericFailure;
  }
  return kUsageError;
}

}  // namespace rscreen::cli
