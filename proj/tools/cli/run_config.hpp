#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>

#include "rscreen/model.hpp"
#include "rscreen/types.hpp"

namespace rscreen::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Physical parameters plus command options. Unset options fall back to
// per-command defaults (t_end = 10 T, step = T / 8192).
struct RunConfig {
  ScreenParams params;
  std::optional<double> t_end;
  std::optional<double> step;
  double k1_max = 25.0;
  int steps = 25;
  int thin = 1;
  std::string output;
  std::optional<Amplitudes> seed;
  std::optional<PhysState> initial;
};

// Flat `key = value` lines; `#` starts a comment, string values may be
// double-quoted. Unknown or repeated keys, malformed numbers and invalid
// parameters raise ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// Applies one key to the config, as if it had appeared in a file.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

void validate(const RunConfig& cfg);

}  // namespace rscreen::cli
