#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dkc/cli/config.hpp"
#include "json.hpp"

namespace dkc::cli {

/// Exit codes of the dkc tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Scientific notation with 12 significant digits, independent of locale.
std::string format_number(double value);
/// The double that format_number(value) denotes.
double round_to_output(double value);

struct CommandOptions {
  bool uncoupled_only = false;
  unsigned threads = 1;
};

/// Each command writes its data files into cfg.out_dir and returns the JSON
/// summary that is also printed on stdout.
nlohmann::json cmd_coupled(const RunConfig& cfg, const CommandOptions& opt);
nlohmann::json cmd_gain_scan(const RunConfig& cfg, const CommandOptions& opt);
nlohmann::json cmd_optimize(const RunConfig& cfg, const CommandOptions& opt);
nlohmann::json cmd_species_info(const RunConfig& cfg);

/// Full command line handling; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dkc::cli
