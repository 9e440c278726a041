#ifndef CRSN_MONTECARLO_HPP
#define CRSN_MONTECARLO_HPP

// Event-level simulators used as independent checks of the closed forms.
// They work from primitives only (channel state, conditional sensing errors,
// PU count and wake-ups, bit errors) and never read the derived composite
// probabilities.
//
// Every trial draws from its own counter-based stream keyed by (seed, trial
// index). Trials are grouped in fixed-size chunks whose partial sums are
// reduced in chunk order, so results do not depend on the worker count.

#include <array>
#include <cstdint>
#include <limits>

#include "crsn/geometry.hpp"
#include "crsn/scenario.hpp"
#include "crsn/spectrum.hpp"

namespace crsn {

/// SplitMix64 finalizer applied to key + counter * golden ratio. Satisfies
/// UniformRandomBitGenerator, so it can drive <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct SimulationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Per-slot primitives of the link simulator.
struct SlotModel {
  double p_idle = 0.0;
  double fa = 0.0;          ///< P(sensed busy | idle)
  double d = 0.0;           ///< P(sensed busy | busy)
  double mean_pus = 0.0;    ///< rho_p * S(z, r_p)
  double p_silent = 1.0;    ///< e^{-tau_t beta}
  std::uint64_t bits = 0;   ///< floor(zeta)
  double ber = 0.0;
};

/// Builds the slot primitives for a transmitter-receiver pair z apart.
SlotModel make_slot_model(const NetworkScenario& scenario, double z,
                          const SensingDesign& sensing);

/// Scenario index 0..9 (S1..S10) of one simulated slot.
int simulate_slot(const SlotModel& model, CounterRng& rng);

struct LinkTrialEstimate {
  SimulationEstimate p_s6;         ///< share of slots that end in SFT
  SimulationEstimate energy;       ///< J per episode
  SimulationEstimate time;         ///< s per episode
  SimulationEstimate trials;       ///< slots per episode
  std::array<std::uint64_t, 10> counts{};
  std::uint64_t n_slots = 0;
  std::uint64_t n_episodes = 0;

  /// Frequency of scenario i with its binomial standard error.
  SimulationEstimate frequency(int i) const;
};

/// Runs n_episodes episodes, each repeating slots until SFT (scenario S6).
/// r_s sets the transmit power, and therefore the energy per transmitting slot.
/// z is the transmitter-receiver distance that shapes the guardring union.
LinkTrialEstimate simulate_link_trials(const NetworkScenario& scenario, double r_s, double z,
                                       const SensingDesign& sensing, std::uint64_t n_episodes,
                                       std::uint64_t seed, unsigned workers = 1);

struct ScenarioFrequencies {
  std::array<std::uint64_t, 10> counts{};
  std::uint64_t n_slots = 0;
  std::uint64_t seed = 0;

  SimulationEstimate frequency(int i) const;
};

/// n_slots independent slots, counted by scenario.
ScenarioFrequencies simulate_scenario_frequencies(const NetworkScenario& scenario, double z,
                                                  const SensingDesign& sensing,
                                                  std::uint64_t n_slots, std::uint64_t seed,
                                                  unsigned workers = 1);

struct HopProgressEstimate {
  SimulationEstimate progress;  ///< W over direct and forwarded trials
  SimulationEstimate distance;  ///< Z over forwarded trials
  std::uint64_t n_direct = 0;   ///< source already within r_s of the sink
  std::uint64_t n_forwarded = 0;
  std::uint64_t n_empty = 0;    ///< no neighbor closer to the sink; excluded from W
};

/// Least-remaining-distance forwarding from a uniform source in the field.
/// Requires rho_s * pi * r_s^2 >= 5.
HopProgressEstimate simulate_hop_progress(const FieldGeometry& field, std::uint64_t n_trials,
                                          std::uint64_t seed, unsigned workers = 1);

/// Hit-or-miss estimate of the union area of two radius-r_p disks z apart.
/// Requires n_samples >= 1e4.
SimulationEstimate estimate_guardring_area(double z, double r_p, std::uint64_t n_samples,
                                           std::uint64_t seed, unsigned workers = 1);

}  // namespace crsn

#endif  // CRSN_MONTECARLO_HPP
