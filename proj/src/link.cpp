#include "crsn/link.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "crsn/errors.hpp"

namespace crsn {

using detail::checked_probability;
using detail::format_value;

GuardringArea guardring_area(double z, double r_p) {
  if (!(r_p > 0.0)) throw DomainError("guardring radius must be positive, got " + format_value(r_p));
  if (!(z >= 0.0)) throw DomainError("transmitter-receiver distance must be >= 0, got " + format_value(z));
  const double full = 2.0 * std::numbers::pi * r_p * r_p;
  if (z > 2.0 * r_p) return {full, true};
  const double overlap_angle = std::acos(z / (2.0 * r_p));
  return {full - 2.0 * r_p * r_p * overlap_angle + 0.5 * z * std::sqrt(4.0 * r_p * r_p - z * z),
          false};
}

double no_pu_arrival_prob(double rho_p, double s_area, double tau_t, double beta) {
  if (!(rho_p >= 0.0) || !(s_area >= 0.0) || !(tau_t >= 0.0) || !(beta >= 0.0)) {
    throw DomainError("no-arrival probability needs non-negative inputs");
  }
  // 1 - e^{-tau_t beta} is the chance a silent PU wakes up within tau_t.
  return std::exp(-rho_p * s_area * -std::expm1(-tau_t * beta));
}

FrameReliability frame_reliability(double gamma, double k_mod, double bandwidth,
                                   double tau_t) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("receiver SNR must be non-negative, got " + format_value(gamma));
  }
  if (!(k_mod > 0.0)) throw DomainError("modulation constant must be positive");
  if (!(bandwidth > 0.0)) throw DomainError("bandwidth must be positive");
  if (!(tau_t >= 0.0)) throw DomainError("transmission duration must be >= 0");

  FrameReliability out;
  out.gamma = gamma;
  out.k_mod = k_mod;
  out.ber = 0.5 * std::erfc(std::sqrt(k_mod * gamma));
  out.rate = bandwidth * std::log2(1.0 + gamma);
  out.zeta = tau_t * out.rate;
  out.p_rel = std::exp(out.zeta * std::log1p(-out.ber));
  return out;
}

ScenarioSet scenario_set(int scenario_index) {
  switch (scenario_index) {
    case 3:
    case 4:
    case 9:
      return ScenarioSet::B;
    case 5:
      return ScenarioSet::C;
    default:
      if (scenario_index < 0 || scenario_index > 9) {
        throw DomainError("scenario index out of range: " + std::to_string(scenario_index));
      }
      return ScenarioSet::A;
  }
}

ScenarioProbabilities scenario_probs(const SensingProbabilities& sensing,
                                     const PuActivity& activity, double p_np,
                                     double p_rel) {
  const double pi = activity.p_idle();
  const double pb = activity.p_busy();
  checked_probability(sensing.p_fa, "P_fa");
  checked_probability(sensing.p_v, "P_v");
  checked_probability(sensing.p_d, "P_d");
  checked_probability(sensing.p_md, "P_md");
  p_np = checked_probability(p_np, "P_np");
  p_rel = checked_probability(p_rel, "P_rel");

  const auto c = conditional(sensing, activity);
  ScenarioProbabilities out;
  auto& p = out.p;
  const double both_vacant = pi * c.v * c.v;
  p[0] = pi * c.fa * c.fa;
  p[1] = pi * c.fa * c.v;
  p[2] = pi * c.v * c.fa;
  p[3] = both_vacant * (1.0 - p_np);
  p[4] = both_vacant * p_np * (1.0 - p_rel);
  p[5] = both_vacant * p_np * p_rel;
  p[6] = pb * c.d * c.d;
  p[7] = pb * c.d * c.md;
  p[8] = pb * c.md * c.d;
  p[9] = pb * c.md * c.md;

  double total = 0.0;
  for (double v : p) total += v;
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConsistencyError("scenario probabilities sum to " + format_value(total));
  }
  out.p_a = p[0] + p[1] + p[2] + p[6] + p[7] + p[8];
  out.p_b = p[3] + p[4] + p[9];
  out.p_c = p[5];
  out.p_np = p_np;
  out.p_rel = p_rel;
  return out;
}

double trials_pmf(const ScenarioProbabilities& probs, std::int64_t t) {
  if (t < 1) throw DomainError("trial count must be >= 1, got " + std::to_string(t));
  return probs.p_c * std::pow(probs.p_a + probs.p_b, static_cast<double>(t - 1));
}

namespace {

// C(m, k) p_a^k p_b^(m-k) for k = 0..m, evaluated in log space.
std::vector<double> binomial_weights(std::int64_t m, double p_a, double p_b) {
  std::vector<double> w(static_cast<std::size_t>(m + 1), 0.0);
  if (p_a == 0.0 && p_b == 0.0) {
    if (m == 0) w[0] = 1.0;
    return w;
  }
  if (p_a == 0.0) {
    w[0] = std::pow(p_b, static_cast<double>(m));
    return w;
  }
  if (p_b == 0.0) {
    w[static_cast<std::size_t>(m)] = std::pow(p_a, static_cast<double>(m));
    return w;
  }
  const double log_a = std::log(p_a);
  const double log_b = std::log(p_b);
  double log_choose = 0.0;
  for (std::int64_t k = 0; k <= m; ++k) {
    w[static_cast<std::size_t>(k)] =
        std::exp(log_choose + static_cast<double>(k) * log_a + static_cast<double>(m - k) * log_b);
    log_choose += std::log(static_cast<double>(m - k)) - std::log(static_cast<double>(k + 1));
  }
  return w;
}

}  // namespace

double trials_pmf_binomial(const ScenarioProbabilities& probs, std::int64_t t) {
  if (t < 1) throw DomainError("trial count must be >= 1, got " + std::to_string(t));
  double sum = 0.0;
  for (double w : binomial_weights(t - 1, probs.p_a, probs.p_b)) sum += w;
  return probs.p_c * sum;
}

SetEnergies set_energies(const EnergyComponents& energies) {
  const double sensing = 2.0 * energies.e_s;
  const double attempt = sensing + energies.e_t + energies.e_r;
  return {sensing, attempt, attempt};
}

SftExpectation expected_to_sft(const ScenarioProbabilities& probs,
                               const EnergyComponents& energies, double tau_s,
                               double tau_t) {
  if (!(probs.p_c > 0.0)) {
    throw UnreachableSft("successful frame transmission probability is zero");
  }
  const auto e = set_energies(energies);
  const double a_per_c = probs.p_a / probs.p_c;
  const double b_per_c = probs.p_b / probs.p_c;
  SftExpectation out;
  out.expected_energy = e.e_c + a_per_c * e.e_a + b_per_c * e.e_b;
  out.expected_time = (1.0 + b_per_c) * (tau_s + tau_t) + a_per_c * tau_s;
  out.expected_trials = 1.0 / probs.p_c;
  return out;
}

SftExpectation expected_to_sft_series(const ScenarioProbabilities& probs,
                                      const EnergyComponents& energies, double tau_s,
                                      double tau_t, double tail, std::int64_t max_trials) {
  if (!(probs.p_c > 0.0)) {
    throw UnreachableSft("successful frame transmission probability is zero");
  }
  const double fail = probs.p_a + probs.p_b;
  std::int64_t n_terms = 1;
  if (fail > 0.0) {
    const double needed = std::ceil(std::log(tail) / std::log(fail));
    if (!(needed <= static_cast<double>(max_trials))) {
      throw DomainError("series needs " + format_value(needed) + " trial terms");
    }
    n_terms = std::max<std::int64_t>(1, static_cast<std::int64_t>(needed));
  }

  const auto e = set_energies(energies);
  SftExpectation out;
  for (std::int64_t t = 1; t <= n_terms; ++t) {
    const std::int64_t m = t - 1;
    const auto w = binomial_weights(m, probs.p_a, probs.p_b);
    for (std::int64_t k = 0; k <= m; ++k) {
      const double mass = probs.p_c * w[static_cast<std::size_t>(k)];
      const auto kd = static_cast<double>(k);
      const auto rest = static_cast<double>(m - k);
      out.expected_energy += mass * (e.e_c + kd * e.e_a + rest * e.e_b);
      out.expected_time += mass * (static_cast<double>(t - k) * (tau_s + tau_t) + kd * tau_s);
      out.expected_trials += mass * static_cast<double>(t);
    }
  }
  return out;
}

Efficiencies efficiencies(double tau_s, double tau_t, double expected_time) {
  if (!(tau_s > 0.0) || !(tau_t > 0.0) || !(expected_time > 0.0)) {
    throw DomainError("efficiencies need positive durations");
  }
  const double tau_f = tau_s + tau_t;
  return {tau_s / tau_f, tau_t / tau_f, tau_t / expected_time};
}

}  // namespace crsn
