#ifndef CRSN_SPECTRUM_HPP
#define CRSN_SPECTRUM_HPP

// Channel occupancy, energy-detection error probabilities, and the coupling
// between transmission duration, sensing duration and the PU collision
// constraint.

#include <algorithm>

namespace crsn {

/// ON/OFF birth-death activity of the primary users on one channel.
/// `alpha` is the death rate (busy -> idle), `beta` the birth rate
/// (idle -> busy), both in 1/s.
class PuActivity {
 public:
  PuActivity(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double p_idle() const noexcept { return alpha_ / (alpha_ + beta_); }
  double p_busy() const noexcept { return beta_ / (alpha_ + beta_); }
  /// Dominant rate max{alpha, beta}.
  double mu() const noexcept { return std::max(alpha_, beta_); }

 private:
  double alpha_;
  double beta_;
};

struct ChannelProbabilities {
  double p_idle;
  double p_busy;
};

ChannelProbabilities channel_state_probs(const PuActivity& activity);

/// Noise and PU signal variances seen by the energy detector.
class NoiseModel {
 public:
  NoiseModel(double sigma_n2, double sigma_p2);
  static NoiseModel from_ratio(double gamma_p, double sigma_n2 = 1.0);

  double sigma_n2() const noexcept { return sigma_n2_; }
  double sigma_p2() const noexcept { return sigma_p2_; }
  double gamma_p() const noexcept { return sigma_p2_ / sigma_n2_; }

 private:
  double sigma_n2_;
  double sigma_p2_;
};

/// Joint (not conditional) sensing outcome probabilities for one SU.
/// p_fa + p_v = P_idle and p_d + p_md = P_busy.
struct SensingProbabilities {
  double p_fa = 0.0;  ///< idle channel sensed busy
  double p_d = 0.0;   ///< busy channel sensed busy
  double p_v = 0.0;   ///< idle channel sensed vacant
  double p_md = 0.0;  ///< busy channel sensed vacant
};

/// Sensing outcome probabilities conditioned on the true channel state.
struct ConditionalSensing {
  double fa;   ///< P(sensed busy | idle)
  double v;    ///< P(sensed vacant | idle)
  double d;    ///< P(sensed busy | busy)
  double md;   ///< P(sensed vacant | busy)
};

ConditionalSensing conditional(const SensingProbabilities& probs,
                               const PuActivity& activity);

/// Per-slot timing and detection design. tau_f = tau_s + tau_t.
struct SensingDesign {
  double tau_s = 0.0;
  double tau_t = 0.0;
  double tau_f = 0.0;
  double delta = 0.0;
  SensingProbabilities probs;
};

/// Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt 2).
double q_function(double x);

/// Inverse of Q on (0, 1), by bisection followed by Newton refinement on the
/// forward function. Absolute accuracy is about 1e-12.
double q_inverse(double p);

/// Largest tolerable false-alarm probability when transmitting for tau_t under
/// collision bound p_col. Decreases from P_busy * p_col at tau_t = 0 to zero at
/// tau_max. Throws ConstraintViolation for tau_t > tau_max.
double max_false_alarm(double p_col, const PuActivity& activity, double tau_t);

/// Sensing duration at which false alarm and mis-detection balance
/// (P_fa = P_md) for the given p_fa.
double required_sensing_time(double p_fa, double bandwidth,
                             const NoiseModel& noise,
                             const PuActivity& activity);

/// Energy-detector threshold that yields p_fa after sensing for tau_s.
double detection_threshold(double tau_s, double bandwidth,
                           const NoiseModel& noise, double p_fa,
                           double p_idle);

SensingProbabilities sensing_probs(double delta, double tau_s, double bandwidth,
                                   const NoiseModel& noise,
                                   const PuActivity& activity);

/// Longest transmission compatible with the collision bound:
/// -(1/mu) log(1 - p_col / P_idle).
double max_transmission_time(double p_col, const PuActivity& activity);

/// Full chain tau_t -> P_fa -> tau_s -> delta -> sensing probabilities.
SensingDesign design_sensing(double p_col, const PuActivity& activity,
                             double tau_t, double bandwidth,
                             const NoiseModel& noise);

}  // namespace crsn

#endif  // CRSN_SPECTRUM_HPP
