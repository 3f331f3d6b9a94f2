#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "doctest.h"

using namespace rscreen::cli;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::map<std::string, std::string> report(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto space = line.find(' ');
    if (space != std::string::npos) m[line.substr(0, space)] = line.substr(space + 1);
  }
  return m;
}

std::vector<double> numbers(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  return v;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rscreen_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto path = scratch(name);
  std::ofstream(path) << body;
  return path.string();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# reference screen\n"
      "m1 = 11\n"
      "k1_hat = 2.5   # stop\n"
      "output = \"out#1.csv\"\n"
      "seed_a2c = 0.25\n"
      "x2_0 = -1e-3\n");
  const RunConfig cfg = parse_config(in);
  CHECK(cfg.params.m1 == 11.0);
  CHECK(cfg.params.k1_hat == 2.5);
  CHECK(cfg.output == "out#1.csv");
  REQUIRE(cfg.seed.has_value());
  CHECK((*cfg.seed)[2] == 0.25);
  CHECK((*cfg.seed)[0] == 0.0);
  REQUIRE(cfg.initial.has_value());
  CHECK(cfg.initial->x2 == -1e-3);

  std::istringstream unknown("mass = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream repeated("r = 1\nr = 2\n");
  CHECK_THROWS_AS(parse_config(repeated), ConfigError);
  std::istringstream garbage("r = ten\n");
  CHECK_THROWS_AS(parse_config(garbage), ConfigError);
  std::istringstream no_equals("r 10\n");
  CHECK_THROWS_AS(parse_config(no_equals), ConfigError);
  std::istringstream invalid("m1 = -1\n");
  CHECK_THROWS_AS(parse_config(invalid), ConfigError);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == kUsageError);
  CHECK(invoke({"frobnicate"}).code == kUsageError);
  CHECK(invoke({"reproduce", "fig3"}).code == kUsageError);
  CHECK(invoke({"analyze", "--config", scratch("missing.cfg").string()}).code == kUsageError);
  CHECK(invoke({"analyze", "--config", write_config("unknown.cfg", "speed = 1\n")}).code == kUsageError);
  CHECK(invoke({"simulate", "--thin", "0"}).code == kUsageError);
  CHECK(invoke({"simulate", "--step", "1.0"}).code == kUsageError);
  CHECK(invoke({"--help"}).code == kOk);
}

TEST_CASE("analyze") {
  const Outcome o = invoke({"analyze"});
  CHECK(o.code == kOk);
  auto r = report(o.out);
  CHECK(std::stod(r["omega1"]) == doctest::Approx(0.5590170).epsilon(1e-7));
  CHECK(std::stod(r["omega2"]) == doctest::Approx(1.1180340).epsilon(1e-7));
  CHECK(r["all_conditions_hold"] == "true");
  CHECK(r["condition.bounded_generating_flow"] == "121 < 396 true");
  CHECK(r["condition.stop_nondegeneracy"].find("825 true") != std::string::npos);

  const Outcome empty = invoke({"analyze", "--config", write_config("empty.cfg", "")});
  CHECK(empty.code == kOk);
  CHECK(empty.out == o.out);

  const Outcome off = invoke({"analyze", "--config", write_config("off.cfg", "k2_bar = 26\n")});
  CHECK(off.code == kNumericFailure);
  const auto bad = report(off.out);
  CHECK(bad.at("condition.internal_resonance").find("false") != std::string::npos);
}

TEST_CASE("average") {
  const auto path = scratch("average.txt");
  const Outcome o = invoke({"average", "--output", path.string()});
  CHECK(o.code == kOk);
  CHECK(slurp(path) == o.out);
  auto r = report(o.out);
  const auto zero = numbers(r["zero"]);
  REQUIRE(zero.size() == 4);
  CHECK(zero[0] == doctest::Approx(-0.0394237).epsilon(1e-6));
  CHECK(std::abs(zero[1]) + std::abs(zero[2]) + std::abs(zero[3]) <= 1e-10);
  std::vector<double> re;
  for (int i = 0; i < 4; ++i) re.push_back(numbers(r["eigenvalue." + std::to_string(i)])[0]);
  CHECK(re[0] == doctest::Approx(-0.625).epsilon(1e-6));
  CHECK(re[1] == doctest::Approx(-0.625).epsilon(1e-6));
  CHECK(re[2] == doctest::Approx(-0.15625).epsilon(1e-6));
  CHECK(re[3] == doctest::Approx(-0.15625).epsilon(1e-6));
  CHECK(r["stable"] == "true");
  CHECK(std::stod(r["alpha_per_period"]) == doctest::Approx(std::sqrt(5.0) * M_PI / 4).epsilon(1e-12));

  const Outcome small = invoke({"average", "--k1", "0.5"});
  CHECK(small.code == kOk);
  CHECK(std::stod(report(small.out)["second_mode_norm"]) > 0.0);
  CHECK(report(small.out)["stable"] == "true");

  const Outcome unforced = invoke({"average", "--config", write_config("unforced.cfg", "r = 0\n")});
  CHECK(unforced.code == kOk);
  for (double z : numbers(report(unforced.out)["zero"])) CHECK(std::abs(z) <= 1e-12);
}

TEST_CASE("orbit") {
  const Outcome o = invoke({"orbit"});
  CHECK(o.code == kOk);
  auto r = report(o.out);
  CHECK(std::stod(r["max_abs_x1"]) == doctest::Approx(0.4337).epsilon(0.02));
  CHECK(std::stod(r["max_abs_x2"]) == doctest::Approx(0.2982).epsilon(0.02));
  CHECK(std::stod(r["residual"]) <= 1e-8);
  CHECK(r["orbit_stable"] == "true");

  const Outcome degenerate = invoke({"orbit", "--eps", "0"});
  CHECK(degenerate.code == kNumericFailure);
  CHECK(degenerate.err.find("NoConvergence") != std::string::npos);
}

TEST_CASE("simulate") {
  const auto path = scratch("sim.csv");
  const Outcome o = invoke({"simulate", "--thin", "8", "--output", path.string()});
  CHECK(o.code == kOk);
  const std::string text = slurp(path);
  const auto rows = lines(text);
  REQUIRE(!rows.empty());
  CHECK(rows[0] == "t,x1,x2,v1,v2");
  CHECK(rows.size() == 1 + 10 * 8192 / 8 + 1);
  CHECK(rows[1] == "0,0,0,0,0");

  const Outcome again = invoke({"simulate", "--thin", "8", "--output", path.string()});
  CHECK(again.code == kOk);
  CHECK(slurp(path) == text);

  const Outcome stdout_run = invoke({"simulate", "--t-end", "1", "--step", "0.005"});
  CHECK(stdout_run.code == kOk);
  CHECK(lines(stdout_run.out).size() == 1 + 201);

  const Outcome unwritable =
      invoke({"simulate", "--t-end", "1", "--output", (scratch("no_such_dir") / "x" / "y.csv").string()});
  CHECK(unwritable.code == kUsageError);
}

TEST_CASE("continue") {
  const Outcome single = invoke({"continue", "--k1-max", "0", "--steps", "1"});
  CHECK(single.code == kOk);
  const auto rows = lines(single.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "k1_hat,A1C,A1S,A2C,A2S,max_re_eig");
  CHECK(rows[1].rfind("0,-0.039423", 0) == 0);

  const Outcome path = invoke({"continue", "--k1-max", "1", "--steps", "4"});
  CHECK(path.code == kOk);
  const auto table = lines(path.out);
  REQUIRE(table.size() == 6);
  for (std::size_t i = 2; i < table.size(); ++i) {
    std::string row = table[i];
    for (char& c : row) {
      if (c == ',') c = ' ';
    }
    const auto v = numbers(row);
    REQUIRE(v.size() == 6);
    CHECK(std::hypot(v[3], v[4]) > 0.0);
    CHECK(v[5] < 0.0);
  }
}

TEST_CASE("reproduce") {
  const Outcome prop3 = invoke({"reproduce", "prop3"});
  CHECK(prop3.code == kOk);
  auto p = report(prop3.out);
  const double a1c = numbers(p["zero"])[0];
  CHECK(std::stod(p["x1.sin1"]) == doctest::Approx(-11 * a1c).epsilon(1e-9));
  CHECK(std::stod(p["x2.sin1"]) == doctest::Approx(-121.0 / 16 * a1c).epsilon(1e-9));

  const Outcome left = invoke({"reproduce", "fig2-left"});
  CHECK(left.code == kOk);
  const double left_ratio = std::stod(report(left.out)["ratio_c2_c1_relative"]);
  CHECK(left_ratio <= 0.01);

  const auto csv = scratch("fig2_right.csv");
  const Outcome right = invoke({"reproduce", "fig2-right", "--output", csv.string(), "--thin", "16"});
  CHECK(right.code == kOk);
  auto r = report(right.out);
  CHECK(std::stod(r["ratio_c2_c1_x1"]) >= 10 * std::stod(report(left.out)["ratio_c2_c1_x1"]));
  CHECK(r["orbit_stable"] == "true");
  CHECK(lines(slurp(csv)).size() == 1 + 10 * 8192 / 16 + 1);
}
