#include "crsn/montecarlo.hpp"

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "crsn/energy.hpp"
#include "crsn/errors.hpp"
#include "crsn/link.hpp"
#include "crsn/parallel.hpp"

namespace crsn {

using detail::format_value;

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
// Trials per chunk. Fixed, so the reduction tree is the same for any worker count.
constexpr std::uint64_t kChunk = 4096;
constexpr std::uint64_t kMaxSlotsPerEpisode = 100000000;

// Streams of the different simulators are kept apart even under one seed.
constexpr std::uint64_t kLinkDomain = 1;
constexpr std::uint64_t kSlotDomain = 2;
constexpr std::uint64_t kHopDomain = 3;
constexpr std::uint64_t kAreaDomain = 4;

std::uint64_t domain_seed(std::uint64_t seed, std::uint64_t domain) {
  return CounterRng::mix(seed ^ CounterRng::mix(domain * kGolden));
}

// Running count, mean and sum of squared deviations; merged with Chan's update.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  SimulationEstimate estimate(std::uint64_t seed) const {
    SimulationEstimate e;
    e.mean = mean;
    e.n_samples = n;
    e.seed = seed;
    if (n > 1) e.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    return e;
  }
};

SimulationEstimate binomial_estimate(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
  SimulationEstimate e;
  e.n_samples = n;
  e.seed = seed;
  if (n == 0) return e;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  e.mean = p;
  e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return e;
}

// One accumulator per chunk of `kChunk` consecutive trial indices; the caller
// merges them front to back.
template <class Acc, class Body>
std::vector<Acc> run_chunks(std::uint64_t n_trials, unsigned workers, Body&& body) {
  const std::uint64_t n_chunks = (n_trials + kChunk - 1) / kChunk;
  std::vector<Acc> parts(static_cast<std::size_t>(n_chunks));
  parallel_for(parts.size(), workers, [&](std::size_t c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t end = std::min(n_trials, begin + kChunk);
    for (std::uint64_t i = begin; i < end; ++i) body(parts[c], i);
  });
  return parts;
}

std::uint64_t draw_poisson(double mean, CounterRng& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix(mix(seed) + (stream + 1) * kGolden)) {}

std::uint64_t CounterRng::mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::result_type CounterRng::operator()() noexcept {
  return mix(key_ + (++counter_) * kGolden);
}

SlotModel make_slot_model(const NetworkScenario& scenario, double z,
                          const SensingDesign& sensing) {
  scenario.validate();
  const auto c = conditional(sensing.probs, scenario.activity);
  const auto frame = frame_reliability(scenario.receiver_snr(), scenario.k_mod,
                                       scenario.hardware.bandwidth, sensing.tau_t);
  SlotModel m;
  m.p_idle = scenario.activity.p_idle();
  m.fa = detail::checked_probability(c.fa, "conditional false alarm");
  m.d = detail::checked_probability(c.d, "conditional detection");
  m.mean_pus = scenario.rho_p * guardring_area(z, scenario.r_p).area;
  m.p_silent = std::exp(-sensing.tau_t * scenario.activity.beta());
  m.bits = static_cast<std::uint64_t>(std::floor(frame.zeta));
  m.ber = frame.ber;
  return m;
}

int simulate_slot(const SlotModel& m, CounterRng& rng) {
  if (rng.uniform() < m.p_idle) {
    const bool tx_busy = rng.uniform() < m.fa;
    const bool rx_busy = rng.uniform() < m.fa;
    if (tx_busy) return rx_busy ? 0 : 1;
    if (rx_busy) return 2;
    // Both sensed the idle channel as vacant and transmit.
    const std::uint64_t k = draw_poisson(m.mean_pus, rng);
    for (std::uint64_t i = 0; i < k; ++i) {
      if (rng.uniform() >= m.p_silent) return 3;
    }
    for (std::uint64_t b = 0; b < m.bits; ++b) {
      if (rng.uniform() < m.ber) return 4;
    }
    return 5;
  }
  const bool tx_detects = rng.uniform() < m.d;
  const bool rx_detects = rng.uniform() < m.d;
  if (tx_detects) return rx_detects ? 6 : 7;
  return rx_detects ? 8 : 9;
}

SimulationEstimate LinkTrialEstimate::frequency(int i) const {
  auto e = binomial_estimate(counts.at(static_cast<std::size_t>(i)), n_slots, p_s6.seed);
  return e;
}

LinkTrialEstimate simulate_link_trials(const NetworkScenario& scenario, double r_s, double z,
                                       const SensingDesign& sensing, std::uint64_t n_episodes,
                                       std::uint64_t seed, unsigned workers) {
  if (n_episodes < 1) throw DomainError("need at least one episode");
  const SlotModel model = make_slot_model(scenario, z, sensing);
  const auto e = set_energies(slot_energies(scenario.hardware, sensing.tau_s, sensing.tau_t, r_s));
  const double t_sense = sensing.tau_s;
  const double t_full = sensing.tau_s + sensing.tau_t;
  const std::uint64_t key = domain_seed(seed, kLinkDomain);

  struct Part {
    Moments energy, time, trials;
    std::array<std::uint64_t, 10> counts{};
    std::uint64_t slots = 0;
  };
  const auto parts = run_chunks<Part>(n_episodes, workers, [&](Part& p, std::uint64_t ep) {
    CounterRng rng(key, ep);
    double energy = 0.0;
    double time = 0.0;
    std::uint64_t slots = 0;
    for (;;) {
      const int s = simulate_slot(model, rng);
      ++slots;
      ++p.counts[static_cast<std::size_t>(s)];
      if (scenario_set(s) == ScenarioSet::A) {
        energy += e.e_a;
        time += t_sense;
      } else {
        energy += e.e_b;
        time += t_full;
      }
      if (s == 5) break;
      if (slots >= kMaxSlotsPerEpisode) {
        throw UnreachableSft("episode exceeded " + std::to_string(kMaxSlotsPerEpisode) +
                             " slots without a successful frame");
      }
    }
    p.energy.add(energy);
    p.time.add(time);
    p.trials.add(static_cast<double>(slots));
    p.slots += slots;
  });

  Part total;
  for (const auto& p : parts) {
    total.energy.merge(p.energy);
    total.time.merge(p.time);
    total.trials.merge(p.trials);
    for (std::size_t i = 0; i < 10; ++i) total.counts[i] += p.counts[i];
    total.slots += p.slots;
  }

  LinkTrialEstimate out;
  out.energy = total.energy.estimate(seed);
  out.time = total.time.estimate(seed);
  out.trials = total.trials.estimate(seed);
  out.counts = total.counts;
  out.n_slots = total.slots;
  out.n_episodes = n_episodes;
  out.p_s6 = binomial_estimate(total.counts[5], total.slots, seed);
  return out;
}

SimulationEstimate ScenarioFrequencies::frequency(int i) const {
  return binomial_estimate(counts.at(static_cast<std::size_t>(i)), n_slots, seed);
}

ScenarioFrequencies simulate_scenario_frequencies(const NetworkScenario& scenario, double z,
                                                  const SensingDesign& sensing,
                                                  std::uint64_t n_slots, std::uint64_t seed,
                                                  unsigned workers) {
  if (n_slots < 1) throw DomainError("need at least one slot");
  const SlotModel model = make_slot_model(scenario, z, sensing);
  const std::uint64_t key = domain_seed(seed, kSlotDomain);

  using Counts = std::array<std::uint64_t, 10>;
  const auto parts = run_chunks<Counts>(n_slots, workers, [&](Counts& c, std::uint64_t i) {
    CounterRng rng(key, i);
    ++c[static_cast<std::size_t>(simulate_slot(model, rng))];
  });

  ScenarioFrequencies out;
  for (const auto& c : parts) {
    for (std::size_t i = 0; i < 10; ++i) out.counts[i] += c[i];
  }
  out.n_slots = n_slots;
  out.seed = seed;
  return out;
}

HopProgressEstimate simulate_hop_progress(const FieldGeometry& field, std::uint64_t n_trials,
                                          std::uint64_t seed, unsigned workers) {
  field.validate();
  const double r = field.r_s;
  const double mean_neighbors = field.rho_s * std::numbers::pi * r * r;
  if (mean_neighbors < 5.0) {
    throw DomainError("forwarding simulation needs rho_s pi r_s^2 >= 5, got " +
                      format_value(mean_neighbors));
  }
  if (n_trials < 1) throw DomainError("need at least one trial");
  const std::uint64_t key = domain_seed(seed, kHopDomain);
  const double big_gamma = field.big_gamma;

  struct Part {
    Moments progress, distance;
    std::uint64_t direct = 0, forwarded = 0, empty = 0;
  };
  const auto parts = run_chunks<Part>(n_trials, workers, [&](Part& p, std::uint64_t i) {
    CounterRng rng(key, i);
    // Sink at the origin; by rotational symmetry the source sits on the x axis.
    const double x = big_gamma * std::sqrt(rng.uniform());
    if (x <= r) {
      ++p.direct;
      p.progress.add(x);
      return;
    }
    const Eigen::Vector2d source(x, 0.0);
    // Neighbors outside the field would be farther than Gamma >= x from the
    // sink, so they never qualify and the disk need not be clipped.
    const std::uint64_t k = draw_poisson(mean_neighbors, rng);
    double best2 = x * x;
    Eigen::Vector2d chosen = Eigen::Vector2d::Zero();
    for (std::uint64_t n = 0; n < k; ++n) {
      // Uniform point in the range disk by rejection from its bounding square.
      Eigen::Vector2d offset;
      do {
        offset << 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0;
      } while (offset.squaredNorm() > 1.0);
      offset *= r;
      const double remaining2 = (source + offset).squaredNorm();
      if (remaining2 < best2) {
        best2 = remaining2;
        chosen = offset;
      }
    }
    if (best2 >= x * x) {
      ++p.empty;
      return;
    }
    ++p.forwarded;
    p.progress.add(x - std::sqrt(best2));
    p.distance.add(chosen.norm());
  });

  Part total;
  for (const auto& p : parts) {
    total.progress.merge(p.progress);
    total.distance.merge(p.distance);
    total.direct += p.direct;
    total.forwarded += p.forwarded;
    total.empty += p.empty;
  }
  HopProgressEstimate out;
  out.progress = total.progress.estimate(seed);
  out.distance = total.distance.estimate(seed);
  out.n_direct = total.direct;
  out.n_forwarded = total.forwarded;
  out.n_empty = total.empty;
  return out;
}

SimulationEstimate estimate_guardring_area(double z, double r_p, std::uint64_t n_samples,
                                           std::uint64_t seed, unsigned workers) {
  if (!(r_p > 0.0)) throw DomainError("guardring radius must be positive");
  if (!(z >= 0.0)) throw DomainError("disk separation must be >= 0");
  if (n_samples < 10000) {
    throw DomainError("area estimate needs at least 1e4 samples, got " +
                      std::to_string(n_samples));
  }
  const std::uint64_t key = domain_seed(seed, kAreaDomain);
  const double half = 0.5 * z;
  const double width = z + 2.0 * r_p;
  const double height = 2.0 * r_p;
  const double r2 = r_p * r_p;

  const auto parts = run_chunks<std::uint64_t>(n_samples, workers,
                                               [&](std::uint64_t& hits, std::uint64_t i) {
    CounterRng rng(key, i);
    const double x = -half - r_p + width * rng.uniform();
    const double y = -r_p + height * rng.uniform();
    const double dl = x + half;
    const double dr = x - half;
    if (dl * dl + y * y <= r2 || dr * dr + y * y <= r2) ++hits;
  });

  std::uint64_t hits = 0;
  for (const auto h : parts) hits += h;
  auto e = binomial_estimate(hits, n_samples, seed);
  const double rect = width * height;
  e.mean *= rect;
  e.std_error *= rect;
  return e;
}

}  // namespace crsn
