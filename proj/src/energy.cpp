#include "crsn/energy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "crsn/errors.hpp"

namespace crsn {

using detail::format_value;

void RadioHardware::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be positive, got " + format_value(v));
    }
  };
  positive(gamma_0, "gamma_0");
  positive(n_rx, "n_rx");
  positive(n_0, "n_0");
  positive(bandwidth, "bandwidth");
  positive(wavelength, "wavelength");
  positive(eta_amp, "eta_amp");
  positive(g_a, "g_a");
  positive(p_elec, "p_elec");
  positive(p_rx, "p_rx");
  positive(p_s, "p_s");
  positive(kappa, "kappa");
  if (eta_amp > 1.0) {
    throw DomainError("eta_amp must not exceed 1, got " + format_value(eta_amp));
  }
  if (kappa < 2.0) {
    throw DomainError("path loss exponent below free space: kappa = " + format_value(kappa));
  }
}

AmplifierCoefficients amplifier_coefficients(const RadioHardware& hw) {
  const double k = hw.kappa;
  const double spreading = std::pow(4.0 * std::numbers::pi / hw.wavelength, k);
  const double q1 = hw.gamma_0 * hw.n_rx * hw.n_0 * hw.bandwidth * spreading *
                    std::pow(10.0, k) / (hw.g_a * hw.eta_amp);
  return {q1, hw.p_elec};
}

EnergyComponents slot_energies(const RadioHardware& hw, double tau_s, double tau_t,
                               double r_s) {
  if (!(tau_s >= 0.0) || !(tau_t >= 0.0) || !(r_s >= 0.0)) {
    throw DomainError("slot energies need tau_s, tau_t, r_s >= 0");
  }
  const auto [q1, q2] = amplifier_coefficients(hw);
  return {hw.p_s * tau_s, (q1 * std::pow(r_s, hw.kappa) + q2) * tau_t, hw.p_rx * tau_t};
}

}  // namespace crsn
