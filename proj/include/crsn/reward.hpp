#ifndef CRSN_REWARD_HPP
#define CRSN_REWARD_HPP

#include "crsn/energy.hpp"
#include "crsn/link.hpp"
#include "crsn/scenario.hpp"
#include "crsn/spectrum.hpp"

namespace crsn {

/// Every intermediate quantity of one reward evaluation.
struct RewardBreakdown {
  double r_s = 0.0;
  double tau_t = 0.0;
  double tau_max = 0.0;
  SensingDesign sensing;
  double expected_progress = 0.0;  ///< E{W}
  double expected_distance = 0.0;  ///< E{Z}
  double phi_max = 0.0;
  double guardring_area = 0.0;     ///< S at z = E{Z}
  FrameReliability frame;
  ScenarioProbabilities scenarios;  ///< p_np lives here
  EnergyComponents energies;
  SftExpectation sft;
  Efficiencies efficiency;
  double lambda = 0.0;  ///< (tau_t R / E{tau_sft}) E{W} / E{E_sft}, bit m / J
};

/// Full reward pipeline at (r_s, tau_t). Throws ConstraintViolation naming
/// "r_s < r_p" or "tau_t < tau_max", DomainError for other invalid inputs and
/// UnreachableSft when P_C = 0.
RewardBreakdown evaluate_point(const NetworkScenario& scenario, double r_s, double tau_t);

/// Lambda only. Skips scenario validation, so callers scanning many points
/// should validate once up front.
double reward(const NetworkScenario& scenario, double r_s, double tau_t);

}  // namespace crsn

#endif  // CRSN_REWARD_HPP
