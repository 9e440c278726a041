#ifndef CRSN_CLI_CONFIG_HPP
#define CRSN_CLI_CONFIG_HPP

// JSON configuration: a flat object of scenario keys, an optional
// "evaluate" point and optional per-command "overrides". Missing keys take the
// reference defaults; unknown keys are errors.
//
// Units: rates 1/s, durations s, powers W, densities nodes/m^2, lengths m.
// SNRs are spelled with their unit: gamma0_db, gamma_rx_db, gamma_p_linear.

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crsn/scenario.hpp"

namespace crsn::cli {

inline constexpr int kConfigSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvaluatePoint {
  double r_s = 40.0;     ///< m
  double tau_t = 1e-4;   ///< s
};

class Config {
 public:
  /// Reference defaults.
  Config();

  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  /// Scenario keys after defaults and validation.
  const nlohmann::ordered_json& values() const noexcept { return values_; }
  EvaluatePoint evaluate_point() const;

  /// The base scenario.
  NetworkScenario scenario() const;
  /// `preset` with the "overrides"[command] keys applied on top. Commands
  /// whose study fixes some parameters pass their adjusted base here, so user
  /// overrides still win.
  NetworkScenario apply_overrides(NetworkScenario preset, const std::string& command) const;

  /// Complete normalized document; parse(dump()) reproduces this config.
  std::string dump() const;

 private:
  nlohmann::ordered_json values_;
  nlohmann::ordered_json evaluate_;
  nlohmann::ordered_json overrides_;
};

/// Sets the scenario fields named by `keys` (a subset of the scenario keys).
/// Throws ConfigError on an unknown key or a value of the wrong type.
void apply_keys(NetworkScenario& scenario, const nlohmann::ordered_json& keys);

}  // namespace crsn::cli

#endif  // CRSN_CLI_CONFIG_HPP
