#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/run_config.hpp"

namespace rscreen::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNumericFailure = 1;
inline constexpr int kUsageError = 2;

// Each command prints a `key value` report (or CSV) to out and returns an
// exit code. rscreen::Error escapes to the caller; run() maps it.
int cmd_analyze(const RunConfig& cfg, std::ostream& out);
int cmd_average(const RunConfig& cfg, std::ostream& out);
int cmd_orbit(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_continue(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_reproduce(const std::string& scenario, const RunConfig& cfg, std::ostream& out);

// Full command line without the program name, e.g. {"analyze", "--k1", "5"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rscreen::cli
