#include "cli/run_config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>

#include "rscreen/errors.hpp"

namespace rscreen::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("key " + key + ": not a number: " + text);
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("key " + key + ": not an integer: " + text);
  return v;
}

std::string unquote(const std::string& text) {
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    return text.substr(1, text.size() - 2);
  }
  return text;
}

constexpr std::array<const char*, 4> kSeedKeys = {"seed_a1c", "seed_a1s", "seed_a2c", "seed_a2s"};
constexpr std::array<const char*, 4> kInitialKeys = {"x1_0", "x2_0", "v1_0", "v2_0"};

}  // namespace

void set_key(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  ScreenParams& p = cfg.params;
  if (key == "m1") {
    p.m1 = to_double(key, value);
  } else if (key == "m2") {
    p.m2 = to_double(key, value);
  } else if (key == "k0_bar") {
    p.k0_bar = to_double(key, value);
  } else if (key == "k2_bar") {
    p.k2_bar = to_double(key, value);
  } else if (key == "k0_tilde") {
    p.k0_tilde = to_double(key, value);
  } else if (key == "k2_tilde") {
    p.k2_tilde = to_double(key, value);
  } else if (key == "k1_hat") {
    p.k1_hat = to_double(key, value);
  } else if (key == "r") {
    p.r = to_double(key, value);
  } else if (key == "eps") {
    p.eps = to_double(key, value);
  } else if (key == "l") {
    p.l = to_int(key, value);
  } else if (key == "t_end") {
    cfg.t_end = to_double(key, value);
  } else if (key == "step") {
    cfg.step = to_double(key, value);
  } else if (key == "k1_max") {
    cfg.k1_max = to_double(key, value);
  } else if (key == "steps") {
    cfg.steps = to_int(key, value);
  } else if (key == "thin") {
    cfg.thin = to_int(key, value);
  } else if (key == "output") {
    cfg.output = unquote(value);
  } else {
    for (int i = 0; i < 4; ++i) {
      if (key == kSeedKeys[i]) {
        if (!cfg.seed) cfg.seed = Amplitudes::Zero();
        (*cfg.seed)[i] = to_double(key, value);
        return;
      }
      if (key == kInitialKeys[i]) {
        Vec4 s = cfg.initial ? cfg.initial->as_vector() : Vec4::Zero();
        s[i] = to_double(key, value);
        cfg.initial = PhysState::from_vector(s);
        return;
      }
    }
    throw ConfigError("unknown key: " + key);
  }
}

void validate(const RunConfig& cfg) {
  try {
    cfg.params.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (cfg.t_end && !(*cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (cfg.step && !(*cfg.step > 0.0)) throw ConfigError("step must be positive");
  if (!(cfg.k1_max >= 0.0)) throw ConfigError("k1_max must be non-negative");
  if (cfg.steps < 1) throw ConfigError("steps must be at least 1");
  if (cfg.thin < 1) throw ConfigError("thin must be at least 1");
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos && line.find('"') > hash) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("repeated key: " + key);
    set_key(cfg, key, line.substr(eq + 1));
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  return parse_config(in);
}

}  // namespace rscreen::cli
