#include "crsn/scenario.hpp"

#include <cmath>
#include <string>

#include "crsn/errors.hpp"

namespace crsn {

using detail::format_value;

void NetworkScenario::validate() const {
  hardware.validate();
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be positive, got " + format_value(v));
    }
  };
  positive(big_gamma, "big_gamma");
  positive(rho_s, "rho_s");
  positive(r_p, "r_p");
  positive(k_mod, "k_mod");
  if (!(rho_p >= 0.0) || !std::isfinite(rho_p)) {
    throw DomainError("rho_p must be non-negative, got " + format_value(rho_p));
  }
  if (gamma_mode == GammaMode::fixed) positive(gamma_fixed, "gamma_fixed");
  // Also checks 0 < p_col < P_idle.
  (void)tau_max();
}

NetworkScenario reference_scenario() { return NetworkScenario{}; }

}  // namespace crsn
