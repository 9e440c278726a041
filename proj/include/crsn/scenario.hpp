#ifndef CRSN_SCENARIO_HPP
#define CRSN_SCENARIO_HPP

#include <cstdint>

#include "crsn/energy.hpp"
#include "crsn/geometry.hpp"
#include "crsn/spectrum.hpp"

namespace crsn {

/// How the receiver SNR used for BER and rate is chosen.
///   reference: equal to hardware.gamma_0, which the q1 power law delivers at r_s
///   fixed:     gamma_fixed, independent of the transmit power model
enum class GammaMode : std::uint8_t { reference, fixed };

/// Every input of the model. Defaults reproduce the reference deployment.
struct NetworkScenario {
  PuActivity activity{3.0, 3.0};
  NoiseModel noise = NoiseModel::from_ratio(10.0);
  RadioHardware hardware;
  double big_gamma = 1000.0;  ///< field radius, m
  double rho_s = 0.01;        ///< SU density, nodes/m^2 (only the forwarding simulator uses it)
  double rho_p = 0.001;       ///< PU density, nodes/m^2
  double r_p = 200.0;         ///< PU guardring radius, m
  double p_col = 0.04;        ///< tolerable SU-PU collision probability
  double k_mod = 1.0;         ///< BER modulation constant, 1 for BPSK
  GammaMode gamma_mode = GammaMode::reference;
  double gamma_fixed = 100.0;  ///< linear, used when gamma_mode == fixed

  /// Throws DomainError when any field or sub-field is invalid.
  void validate() const;

  double receiver_snr() const noexcept {
    return gamma_mode == GammaMode::reference ? hardware.gamma_0 : gamma_fixed;
  }
  double tau_max() const { return max_transmission_time(p_col, activity); }
  /// Upper bound on r_s: the guardring radius, or the field radius if smaller.
  double r_s_cap() const noexcept { return r_p < big_gamma ? r_p : big_gamma; }
  FieldGeometry field(double r_s) const { return {big_gamma, rho_s, r_s}; }
};

NetworkScenario reference_scenario();

}  // namespace crsn

#endif  // CRSN_SCENARIO_HPP
