#ifndef CRSN_ENERGY_HPP
#define CRSN_ENERGY_HPP

namespace crsn {

/// SU radio hardware constants. All SNR-like quantities are linear.
struct RadioHardware {
  double gamma_0 = 100.0;        ///< reference receiver SNR
  double n_rx = 12.589;          ///< receiver noise figure
  double n_0 = 4.17e-21;         ///< thermal noise density, W/Hz
  double bandwidth = 10e3;       ///< Hz
  double wavelength = 0.125;     ///< m
  double eta_amp = 0.2;          ///< amplifier efficiency, (0, 1]
  double g_a = 0.01;             ///< antenna gain
  double p_elec = 3.63e-3;       ///< transmitter circuit power, W
  double p_rx = 11.13e-3;        ///< receiver power, W
  double p_s = 0.7;              ///< sensing power, W
  double kappa = 2.5;            ///< path loss exponent, >= 2

  /// Throws DomainError on a non-positive field, eta_amp > 1 or kappa < 2.
  void validate() const;
};

struct AmplifierCoefficients {
  double q1;  ///< W per m^kappa
  double q2;  ///< W
};

/// q1 = gamma_0 N_rx N_0 B (4 pi / lambda)^kappa 10^kappa / (G_a eta_amp),
/// q2 = P_elec. The 10^kappa factor is kept exactly as in the source model; it
/// dominates the absolute scale of the reward.
AmplifierCoefficients amplifier_coefficients(const RadioHardware& hw);

/// Energy spent in one slot by the SU pair's sensing, transmit and receive
/// chains, in J.
struct EnergyComponents {
  double e_s = 0.0;
  double e_t = 0.0;
  double e_r = 0.0;
};

EnergyComponents slot_energies(const RadioHardware& hw, double tau_s, double tau_t,
                               double r_s);

}  // namespace crsn

#endif  // CRSN_ENERGY_HPP
