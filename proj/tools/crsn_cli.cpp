// crsn: evaluate, optimize and validate the cognitive radio sensor network
// energy-efficiency model from the command line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crsn/cli/commands.hpp"
#include "crsn/cli/config.hpp"

int main(int argc, char** argv) {
  using namespace crsn::cli;
  CommandOptions opt;
  std::string seed_text;
  std::string trials_text;

  CLI::App app{"Energy-efficiency model of a cognitive radio sensor network"};
  app.add_option("command", opt.command, "evaluate | optimize | sensitivity | sweep | simulate | validate")
      ->check(CLI::IsMember({"evaluate", "optimize", "sensitivity", "sweep", "simulate", "validate"}));
  app.add_option("--config", opt.config_path, "JSON config file (defaults when omitted)");
  app.add_option("--out", opt.out_path, "write results here instead of stdout");
  app.add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed_text, "RNG seed (simulate, validate)");
  app.add_option("--trials", trials_text, "trial count, e.g. 1e6 (simulate, validate)");
  app.add_option("--workers", opt.workers, "worker threads, 0 for all cores; never changes results");
  app.add_option("--grid-rs", opt.grid_rs, "r_s grid points");
  app.add_option("--grid-taut", opt.grid_tau_t, "tau_t grid points");
  app.add_flag("--dump-config", opt.dump_config, "print the resolved config and exit");
  app.add_option("--rs", opt.r_s, "evaluation r_s in m (evaluate, simulate, validate)");
  app.add_option("--taut", opt.tau_t, "evaluation tau_t in s (evaluate, simulate, validate)");
  app.add_option("--surface", opt.surface_path, "optimize: also write the reward surface here");
  app.add_option("--kind", opt.kind, "simulate: link, slots, hop or area");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (!seed_text.empty()) {
      std::size_t used = 0;
      opt.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw ConfigError("--seed must be an unsigned integer");
    }
    if (!trials_text.empty()) opt.trials = parse_count(trials_text, "--trials");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run_command(opt, std::cout, std::cerr);
}
