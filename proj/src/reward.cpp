#include "crsn/reward.hpp"

#include <cmath>

#include "crsn/errors.hpp"
#include "crsn/geometry.hpp"

namespace crsn {

using detail::format_value;

namespace {

RewardBreakdown assemble(const NetworkScenario& s, double r_s, double tau_t) {
  RewardBreakdown out;
  out.r_s = r_s;
  out.tau_t = tau_t;
  out.tau_max = s.tau_max();
  if (!(r_s > 0.0)) throw DomainError("r_s must be positive, got " + format_value(r_s));
  if (!(r_s < s.r_p)) {
    throw ConstraintViolation("r_s < r_p", "r_s = " + format_value(r_s) +
                                               " m, r_p = " + format_value(s.r_p) + " m");
  }
  if (!(tau_t > 0.0)) throw DomainError("tau_t must be positive, got " + format_value(tau_t));
  if (!(tau_t < out.tau_max)) {
    throw ConstraintViolation("tau_t < tau_max", "tau_t = " + format_value(tau_t) +
                                                     " s, tau_max = " +
                                                     format_value(out.tau_max) + " s");
  }

  const RadioHardware& hw = s.hardware;
  out.sensing = design_sensing(s.p_col, s.activity, tau_t, hw.bandwidth, s.noise);

  out.expected_progress = expected_hop_progress(r_s, s.big_gamma);
  out.expected_distance = expected_hop_distance(out.expected_progress, r_s);
  out.phi_max = std::acos(out.expected_progress / r_s);
  out.guardring_area = guardring_area(out.expected_distance, s.r_p).area;

  const double p_np = no_pu_arrival_prob(s.rho_p, out.guardring_area, tau_t, s.activity.beta());
  out.frame = frame_reliability(s.receiver_snr(), s.k_mod, hw.bandwidth, tau_t);
  out.scenarios = scenario_probs(out.sensing.probs, s.activity, p_np, out.frame.p_rel);

  out.energies = slot_energies(hw, out.sensing.tau_s, tau_t, r_s);
  out.sft = expected_to_sft(out.scenarios, out.energies, out.sensing.tau_s, tau_t);
  out.efficiency = efficiencies(out.sensing.tau_s, tau_t, out.sft.expected_time);

  const double goodput = tau_t * out.frame.rate / out.sft.expected_time;
  out.lambda = goodput * out.expected_progress / out.sft.expected_energy;
  return out;
}

}  // namespace

RewardBreakdown evaluate_point(const NetworkScenario& scenario, double r_s, double tau_t) {
  scenario.validate();
  return assemble(scenario, r_s, tau_t);
}

double reward(const NetworkScenario& scenario, double r_s, double tau_t) {
  return assemble(scenario, r_s, tau_t).lambda;
}

}  // namespace crsn
