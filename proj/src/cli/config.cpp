#include "crsn/cli/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crsn/errors.hpp"

namespace crsn::cli {

using json = nlohmann::ordered_json;

namespace {

struct KeySpec {
  const char* name;
  double default_value;
};

// Scenario keys in dump order, with the reference defaults.
constexpr std::array<KeySpec, 22> kNumericKeys{{
    {"alpha", 3.0},
    {"beta", 3.0},
    {"gamma_p_linear", 10.0},
    {"sigma_n2", 1.0},
    {"gamma0_db", 20.0},
    {"n_rx", 12.589},
    {"n_0", 4.17e-21},
    {"bandwidth", 10e3},
    {"wavelength", 0.125},
    {"eta_amp", 0.2},
    {"g_a", 0.01},
    {"p_elec", 3.63e-3},
    {"p_rx", 11.13e-3},
    {"p_s", 0.7},
    {"kappa", 2.5},
    {"big_gamma", 1000.0},
    {"rho_s", 0.01},
    {"rho_p", 0.001},
    {"r_p", 200.0},
    {"p_col", 0.04},
    {"k_mod", 1.0},
    {"gamma_rx_db", 20.0},
}};

constexpr const char* kGammaModeKey = "gamma_mode";
constexpr std::array<const char*, 6> kCommands{"evaluate", "optimize", "sensitivity",
                                               "sweep",    "simulate", "validate"};

bool is_numeric_key(const std::string& k) {
  for (const auto& spec : kNumericKeys) {
    if (k == spec.name) return true;
  }
  return false;
}

bool is_scenario_key(const std::string& k) { return k == kGammaModeKey || is_numeric_key(k); }

bool is_command(const std::string& k) {
  for (const auto* c : kCommands) {
    if (k == c) return true;
  }
  return false;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("config key '" + key + "' must be finite");
  return x;
}

GammaMode parse_gamma_mode(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "reference") return GammaMode::reference;
    if (s == "fixed") return GammaMode::fixed;
  }
  throw ConfigError("config key 'gamma_mode' must be \"reference\" or \"fixed\"");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Scenario keys of `in`, normalized (numbers as doubles), checked for type.
json scenario_keys(const json& in, const std::string& where) {
  json out = json::object();
  for (const auto& [k, v] : in.items()) {
    if (!is_scenario_key(k)) throw ConfigError("unknown config key '" + k + "'" + where);
    if (k == kGammaModeKey) {
      parse_gamma_mode(v);
      out[k] = v;
    } else {
      out[k] = number(v, k);
    }
  }
  return out;
}

NetworkScenario checked_scenario(NetworkScenario s, const std::string& where) {
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError("invalid configuration" + where + ": " + e.what());
  }
  return s;
}

}  // namespace

void apply_keys(NetworkScenario& s, const json& keys) {
  double alpha = s.activity.alpha();
  double beta = s.activity.beta();
  double gamma_p = s.noise.gamma_p();
  double sigma_n2 = s.noise.sigma_n2();
  bool activity_changed = false;
  bool noise_changed = false;

  for (const auto& [k, v] : keys.items()) {
    if (k == kGammaModeKey) {
      s.gamma_mode = parse_gamma_mode(v);
      continue;
    }
    if (!is_numeric_key(k)) throw ConfigError("unknown config key '" + k + "'");
    const double x = number(v, k);
    RadioHardware& hw = s.hardware;
    if (k == "alpha") {
      alpha = x;
      activity_changed = true;
    } else if (k == "beta") {
      beta = x;
      activity_changed = true;
    } else if (k == "gamma_p_linear") {
      gamma_p = x;
      noise_changed = true;
    } else if (k == "sigma_n2") {
      sigma_n2 = x;
      noise_changed = true;
    } else if (k == "gamma0_db") {
      hw.gamma_0 = db_to_linear(x);
    } else if (k == "n_rx") {
      hw.n_rx = x;
    } else if (k == "n_0") {
      hw.n_0 = x;
    } else if (k == "bandwidth") {
      hw.bandwidth = x;
    } else if (k == "wavelength") {
      hw.wavelength = x;
    } else if (k == "eta_amp") {
      hw.eta_amp = x;
    } else if (k == "g_a") {
      hw.g_a = x;
    } else if (k == "p_elec") {
      hw.p_elec = x;
    } else if (k == "p_rx") {
      hw.p_rx = x;
    } else if (k == "p_s") {
      hw.p_s = x;
    } else if (k == "kappa") {
      hw.kappa = x;
    } else if (k == "big_gamma") {
      s.big_gamma = x;
    } else if (k == "rho_s") {
      s.rho_s = x;
    } else if (k == "rho_p") {
      s.rho_p = x;
    } else if (k == "r_p") {
      s.r_p = x;
    } else if (k == "p_col") {
      s.p_col = x;
    } else if (k == "k_mod") {
      s.k_mod = x;
    } else if (k == "gamma_rx_db") {
      s.gamma_fixed = db_to_linear(x);
    }
  }
  try {
    if (activity_changed) s.activity = PuActivity(alpha, beta);
    if (noise_changed) s.noise = NoiseModel::from_ratio(gamma_p, sigma_n2);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

Config::Config() : evaluate_(json::object()), overrides_(json::object()) {
  values_ = json::object();
  for (const auto& spec : kNumericKeys) values_[spec.name] = spec.default_value;
  values_[kGammaModeKey] = "reference";
  const EvaluatePoint p;
  evaluate_["r_s"] = p.r_s;
  evaluate_["tau_t"] = p.tau_t;
}

Config Config::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  Config cfg;
  for (const auto& [k, v] : doc.items()) {
    if (k == "schema_version") {
      if (!v.is_number_integer() || v.get<int>() != kConfigSchemaVersion) {
        throw ConfigError("unsupported config schema_version (expected " +
                          std::to_string(kConfigSchemaVersion) + ")");
      }
    } else if (k == "evaluate") {
      if (!v.is_object()) throw ConfigError("config key 'evaluate' must be an object");
      for (const auto& [ek, ev] : v.items()) {
        if (ek != "r_s" && ek != "tau_t") {
          throw ConfigError("unknown config key 'evaluate." + ek + "'");
        }
        cfg.evaluate_[ek] = number(ev, "evaluate." + ek);
      }
    } else if (k == "overrides") {
      if (!v.is_object()) throw ConfigError("config key 'overrides' must be an object");
      for (const auto& [command, keys] : v.items()) {
        if (!is_command(command)) {
          throw ConfigError("overrides for unknown command '" + command + "'");
        }
        if (!keys.is_object()) {
          throw ConfigError("overrides." + command + " must be an object");
        }
        cfg.overrides_[command] = scenario_keys(keys, " in overrides." + command);
      }
    } else if (is_scenario_key(k)) {
      cfg.values_[k] = k == kGammaModeKey ? v : json(number(v, k));
      if (k == kGammaModeKey) parse_gamma_mode(v);
    } else {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }

  const NetworkScenario base = cfg.scenario();
  for (const auto& [command, keys] : cfg.overrides_.items()) {
    (void)keys;
    cfg.apply_overrides(base, command);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

EvaluatePoint Config::evaluate_point() const {
  return {evaluate_.at("r_s").get<double>(), evaluate_.at("tau_t").get<double>()};
}

NetworkScenario Config::scenario() const {
  NetworkScenario s;
  apply_keys(s, values_);
  return checked_scenario(s, "");
}

NetworkScenario Config::apply_overrides(NetworkScenario preset, const std::string& command) const {
  const auto it = overrides_.find(command);
  if (it == overrides_.end()) return preset;
  apply_keys(preset, *it);
  return checked_scenario(preset, " (overrides." + command + ")");
}

std::string Config::dump() const {
  json doc = json::object();
  doc["schema_version"] = kConfigSchemaVersion;
  for (const auto& [k, v] : values_.items()) doc[k] = v;
  doc["evaluate"] = evaluate_;
  doc["overrides"] = overrides_;
  return doc.dump(2) + "\n";
}

}  // namespace crsn::cli
