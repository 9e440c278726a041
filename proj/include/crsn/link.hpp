#ifndef CRSN_LINK_HPP
#define CRSN_LINK_HPP

// Single-hop link: the ten spectrum-utilization scenarios of one slot, the
// geometric distribution of slots until a successful frame transmission (SFT),
// and the expected energy and time spent reaching it.

#include <array>
#include <cstdint>

#include "crsn/energy.hpp"
#include "crsn/spectrum.hpp"

namespace crsn {

struct GuardringArea {
  double area = 0.0;      ///< m^2
  bool disjoint = false;  ///< z > 2 r_p: the two disks do not overlap
};

/// Area of the union of two radius-r_p disks whose centers are z apart.
GuardringArea guardring_area(double z, double r_p);

/// Probability that none of the Poisson(rho_p * S) PUs in the guardring union
/// becomes active during tau_t.
double no_pu_arrival_prob(double rho_p, double s_area, double tau_t, double beta);

struct FrameReliability {
  double gamma = 0.0;  ///< receiver SNR (linear)
  double k_mod = 1.0;  ///< modulation constant, 1 for BPSK
  double rate = 0.0;   ///< bit/s
  double zeta = 0.0;   ///< frame size in bits, real valued
  double ber = 0.0;
  double p_rel = 0.0;  ///< probability that all zeta bits are correct
};

FrameReliability frame_reliability(double gamma, double k_mod, double bandwidth,
                                   double tau_t);

/// Scenario S1..S10 are stored at p[0]..p[9].
///   S1-S3  idle channel, at least one false alarm       (set A)
///   S4     idle, both vacant, a PU arrives during tau_t (set B)
///   S5     idle, both vacant, no PU, frame bit error    (set B)
///   S6     idle, both vacant, no PU, frame intact       (set C, the SFT)
///   S7-S9  busy channel, at least one correct detection (set A)
///   S10    busy channel, double mis-detection           (set B)
struct ScenarioProbabilities {
  std::array<double, 10> p{};
  double p_a = 0.0;
  double p_b = 0.0;
  double p_c = 0.0;
  double p_np = 0.0;
  double p_rel = 0.0;
};

/// Scenario set a slot outcome belongs to.
enum class ScenarioSet : std::uint8_t { A, B, C };

/// Set membership of scenario index 0..9 (S1..S10).
ScenarioSet scenario_set(int scenario_index);

/// Throws ConsistencyError when the ten probabilities do not sum to one within
/// 1e-9.
ScenarioProbabilities scenario_probs(const SensingProbabilities& sensing,
                                     const PuActivity& activity, double p_np,
                                     double p_rel);

/// P(T = t) = P_C (P_A + P_B)^(t-1).
double trials_pmf(const ScenarioProbabilities& probs, std::int64_t t);

/// Same pmf as the explicit binomial sum over how many of the t-1 failed slots
/// belong to set A.
double trials_pmf_binomial(const ScenarioProbabilities& probs, std::int64_t t);

struct SftExpectation {
  double expected_energy = 0.0;  ///< J
  double expected_time = 0.0;    ///< s
  double expected_trials = 0.0;  ///< slots
};

/// Energy per slot of each scenario set: E_A = 2 E_s, E_B = E_C = 2 E_s + E_t + E_r.
struct SetEnergies {
  double e_a;
  double e_b;
  double e_c;
};

SetEnergies set_energies(const EnergyComponents& energies);

/// Closed-form expectations of energy, time and slot count until SFT.
/// Throws UnreachableSft when p_c == 0.
SftExpectation expected_to_sft(const ScenarioProbabilities& probs,
                               const EnergyComponents& energies, double tau_s,
                               double tau_t);

/// The same expectations evaluated as the truncated double series over
/// (t, k), stopping once the remaining trial-count mass is below `tail`.
/// Cost is quadratic in the truncation point; throws DomainError if more than
/// `max_trials` terms would be needed.
SftExpectation expected_to_sft_series(const ScenarioProbabilities& probs,
                                      const EnergyComponents& energies, double tau_s,
                                      double tau_t, double tail = 1e-12,
                                      std::int64_t max_trials = 200000);

struct Efficiencies {
  double theta = 0.0;        ///< tau_s / (tau_s + tau_t), as printed in the source
  double theta_prose = 0.0;  ///< tau_t / (tau_s + tau_t), the "share used for data" reading
  double omega = 0.0;        ///< tau_t / E{tau_sft}
};

Efficiencies efficiencies(double tau_s, double tau_t, double expected_time);

}  // namespace crsn

#endif  // CRSN_LINK_HPP
