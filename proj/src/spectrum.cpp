#include "crsn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "crsn/errors.hpp"

namespace crsn {

using detail::format_value;

PuActivity::PuActivity(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("PU rates must be positive and finite (alpha = " +
                      format_value(alpha) + ", beta = " + format_value(beta) + ")");
  }
}

ChannelProbabilities channel_state_probs(const PuActivity& activity) {
  return {activity.p_idle(), activity.p_busy()};
}

NoiseModel::NoiseModel(double sigma_n2, double sigma_p2)
    : sigma_n2_(sigma_n2), sigma_p2_(sigma_p2) {
  if (!(sigma_n2 > 0.0) || !std::isfinite(sigma_n2)) {
    throw DomainError("noise variance must be positive, got " + format_value(sigma_n2));
  }
  if (!(sigma_p2 > 0.0) || !std::isfinite(sigma_p2)) {
    throw DomainError("PU signal variance must be positive, got " + format_value(sigma_p2));
  }
}

NoiseModel NoiseModel::from_ratio(double gamma_p, double sigma_n2) {
  return NoiseModel(sigma_n2, gamma_p * sigma_n2);
}

ConditionalSensing conditional(const SensingProbabilities& probs,
                               const PuActivity& activity) {
  const double pi = activity.p_idle();
  const double pb = activity.p_busy();
  return {probs.p_fa / pi, probs.p_v / pi, probs.p_d / pb, probs.p_md / pb};
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {

constexpr double kQInverseBracket = 38.5;  // Q(38.5) is below the smallest denormal

// Q^-1 on (0, 0.5]; the result is >= 0.
double q_inverse_upper(double p) {
  double lo = 0.0;
  double hi = kQInverseBracket;
  if (q_function(hi) >= p) return hi;
  // Q is decreasing: Q(lo) >= p > Q(hi).
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (q_function(mid) >= p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  constexpr double inv_sqrt_2pi = 0.3989422804014326779;
  for (int it = 0; it < 8; ++it) {
    const double density = inv_sqrt_2pi * std::exp(-0.5 * x * x);
    if (density <= 0.0) break;
    const double step = (q_function(x) - p) / density;
    double next = x + step;
    if (next < lo || next > hi) next = 0.5 * (x + (step > 0 ? hi : lo));
    if (std::abs(next - x) < 1e-14 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("Q^-1 argument must lie in (0, 1), got " + format_value(p));
  }
  if (p == 0.5) return 0.0;
  // 1 - p is exact for p in [0.5, 1).
  return p < 0.5 ? q_inverse_upper(p) : -q_inverse_upper(1.0 - p);
}

double max_transmission_time(double p_col, const PuActivity& activity) {
  const double pi = activity.p_idle();
  if (!(p_col > 0.0 && p_col < pi)) {
    throw DomainError("collision bound must satisfy 0 < P_col < P_idle (P_col = " +
                      format_value(p_col) + ", P_idle = " + format_value(pi) + ")");
  }
  return -std::log1p(-p_col / pi) / activity.mu();
}

double max_false_alarm(double p_col, const PuActivity& activity, double tau_t) {
  const double tau_max = max_transmission_time(p_col, activity);
  if (!(tau_t >= 0.0)) {
    throw DomainError("transmission duration must be non-negative, got " + format_value(tau_t));
  }
  if (tau_t > tau_max) {
    throw ConstraintViolation("tau_t <= tau_max",
                              "tau_t = " + format_value(tau_t) +
                                  " s exceeds tau_max = " + format_value(tau_max) + " s");
  }
  const double pi = activity.p_idle();
  const double pb = activity.p_busy();
  // P_idle P_busy (1 - (1 - P_col/P_idle) e^{mu tau_t}), written with expm1 so
  // the value keeps relative precision as it approaches zero at tau_max.
  const double exponent = std::log1p(-p_col / pi) + activity.mu() * tau_t;
  return std::max(0.0, -pi * pb * std::expm1(exponent));
}

double required_sensing_time(double p_fa, double bandwidth, const NoiseModel& noise,
                             const PuActivity& activity) {
  if (!(bandwidth > 0.0)) {
    throw DomainError("bandwidth must be positive, got " + format_value(bandwidth));
  }
  const double idle_ratio = p_fa / activity.p_idle();
  const double busy_ratio = p_fa / activity.p_busy();
  if (!(idle_ratio > 0.0 && idle_ratio < 1.0)) {
    throw DomainError("P_fa/P_idle = " + format_value(idle_ratio) + " is outside (0, 1)");
  }
  if (!(busy_ratio > 0.0 && busy_ratio < 1.0)) {
    throw DomainError("P_fa/P_busy = " + format_value(busy_ratio) + " is outside (0, 1)");
  }
  const double gp = noise.gamma_p();
  const double root = q_inverse(idle_ratio) + (gp + 1.0) * q_inverse(busy_ratio);
  if (!(root > 0.0)) {
    throw DomainError("no sensing duration balances P_fa = P_md for P_fa = " +
                      format_value(p_fa));
  }
  return root * root / (bandwidth * gp * gp);
}

double detection_threshold(double tau_s, double bandwidth, const NoiseModel& noise,
                           double p_fa, double p_idle) {
  if (!(tau_s > 0.0)) {
    throw DomainError("sensing duration must be positive, got " + format_value(tau_s));
  }
  if (!(p_fa > 0.0 && p_fa < p_idle)) {
    throw DomainError("detection threshold needs 0 < P_fa < P_idle (P_fa = " +
                      format_value(p_fa) + ", P_idle = " + format_value(p_idle) + ")");
  }
  const double n = tau_s * bandwidth;
  const double s2 = noise.sigma_n2();
  return 2.0 * n * s2 + std::sqrt(4.0 * n * s2 * s2) * q_inverse(p_fa / p_idle);
}

SensingProbabilities sensing_probs(double delta, double tau_s, double bandwidth,
                                   const NoiseModel& noise, const PuActivity& activity) {
  if (!(tau_s > 0.0)) {
    throw DomainError("sensing duration must be positive, got " + format_value(tau_s));
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("detection threshold must be finite and non-negative, got " +
                      format_value(delta));
  }
  const double n = tau_s * bandwidth;
  const double s_idle = noise.sigma_n2();
  const double s_busy = noise.sigma_p2() + noise.sigma_n2();
  const double sqrt_n = std::sqrt(n);

  SensingProbabilities out;
  out.p_fa = activity.p_idle() * q_function((delta - 2.0 * n * s_idle) / (2.0 * sqrt_n * s_idle));
  out.p_md = activity.p_busy() * q_function((2.0 * n * s_busy - delta) / (2.0 * sqrt_n * s_busy));
  out.p_v = activity.p_idle() - out.p_fa;
  out.p_d = activity.p_busy() - out.p_md;
  return out;
}

SensingDesign design_sensing(double p_col, const PuActivity& activity, double tau_t,
                             double bandwidth, const NoiseModel& noise) {
  SensingDesign design;
  const double p_fa = max_false_alarm(p_col, activity, tau_t);
  design.tau_t = tau_t;
  design.tau_s = required_sensing_time(p_fa, bandwidth, noise, activity);
  design.tau_f = design.tau_s + design.tau_t;
  design.delta = detection_threshold(design.tau_s, bandwidth, noise, p_fa, activity.p_idle());
  design.probs = sensing_probs(design.delta, design.tau_s, bandwidth, noise, activity);
  return design;
}

}  // namespace crsn
