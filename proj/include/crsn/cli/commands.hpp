#ifndef CRSN_CLI_COMMANDS_HPP
#define CRSN_CLI_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace crsn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,      ///< bad config, bad flag value or violated constraint
  kExitValidation = 3,  ///< a validate check breached its tolerance
};

struct CommandOptions {
  std::string command;      ///< evaluate, optimize, sensitivity, sweep, simulate, validate
  std::string config_path;  ///< empty: reference defaults
  std::string out_path;     ///< empty: the `out` stream
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned workers = 1;  ///< 0: one per hardware thread
  int grid_rs = 64;
  int grid_tau_t = 64;
  bool dump_config = false;
  std::optional<double> r_s;    ///< evaluation point, overrides the config
  std::optional<double> tau_t;
  std::string surface_path;     ///< optimize: also write the reward surface here
  std::string kind = "link";    ///< simulate: link, slots, hop or area
};

/// A positive whole number written as an integer or in scientific notation
/// ("1000000", "1e6"). Throws ConfigError otherwise.
std::uint64_t parse_count(const std::string& text, const char* what);

/// Runs one command. Results go to `out` (or options.out_path), diagnostics to
/// `err`. Never throws; returns an ExitCode.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace crsn::cli

#endif  // CRSN_CLI_COMMANDS_HPP
