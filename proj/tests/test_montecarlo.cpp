#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"

#include "crsn/errors.hpp"
#include "crsn/link.hpp"
#include "crsn/montecarlo.hpp"
#include "crsn/reward.hpp"

using namespace crsn;

namespace {

constexpr double kPi = std::numbers::pi;

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool within_se(const SimulationEstimate& e, double expected, double k = 3.0) {
  return std::abs(e.mean - expected) <= k * e.std_error;
}

}  // namespace

TEST_CASE("counter-based streams") {
  CounterRng a(42, 7);
  CounterRng b(42, 7);
  CounterRng other_stream(42, 8);
  CounterRng other_seed(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != other_stream());
    CHECK(x != other_seed());
    seen.insert(x);
  }
  CHECK(seen.size() == 1000);

  CounterRng u(1, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  CHECK(std::abs(sum / 100000.0 - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST_CASE("no-arrival probability from individual PU wake-ups") {
  // Direct construction: Poisson PU count, each waking within tau_t with
  // probability 1 - e^{-beta tau_t}.
  const double rho_p = 0.001;
  const double area = guardring_area(60.0, 100.0).area;
  const double tau_t = 1e-3;
  const double beta = 3.0;
  const std::uint64_t n = 1000000;
  std::uint64_t quiet = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    CounterRng rng(99, i);
    std::poisson_distribution<std::uint64_t> count(rho_p * area);
    std::exponential_distribution<double> wake(beta);
    const auto k = count(rng);
    bool any = false;
    for (std::uint64_t j = 0; j < k && !any; ++j) any = wake(rng) < tau_t;
    if (!any) ++quiet;
  }
  const double p = no_pu_arrival_prob(rho_p, area, tau_t, beta);
  const double p_hat = static_cast<double>(quiet) / static_cast<double>(n);
  CHECK(std::abs(p_hat - p) <= 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(n)));
}

TEST_CASE("slot simulation with perfect sensing") {
  NetworkScenario s = reference_scenario();
  SensingDesign d = design_sensing(s.p_col, s.activity, 5e-4, s.hardware.bandwidth, s.noise);
  d.probs.p_fa = 0.0;
  d.probs.p_v = s.activity.p_idle();
  d.probs.p_md = 0.0;
  d.probs.p_d = s.activity.p_busy();

  const double z = 60.0;
  const auto f = simulate_scenario_frequencies(s, z, d, 200000, 3);
  const double p_np = no_pu_arrival_prob(s.rho_p, guardring_area(z, s.r_p).area, 5e-4,
                                         s.activity.beta());
  const double p_rel = frame_reliability(s.receiver_snr(), s.k_mod, s.hardware.bandwidth, 5e-4).p_rel;
  CHECK(within_se(f.frequency(5), s.activity.p_idle() * p_np * p_rel));
  for (int i : {0, 1, 2, 7, 8, 9}) CHECK(f.counts[static_cast<std::size_t>(i)] == 0);
}

TEST_CASE("slot frequencies match the analytic scenario vector") {
  NetworkScenario s = reference_scenario();
  s.gamma_mode = GammaMode::fixed;
  s.gamma_fixed = 3.0;  // rate 2B, so zeta = 2B tau_t is whole
  const double tau_t = 1e-3;
  const double z = 80.0;
  const auto d = design_sensing(s.p_col, s.activity, tau_t, s.hardware.bandwidth, s.noise);
  const double p_np =
      no_pu_arrival_prob(s.rho_p, guardring_area(z, s.r_p).area, tau_t, s.activity.beta());
  const auto frame = frame_reliability(s.receiver_snr(), s.k_mod, s.hardware.bandwidth, tau_t);
  const auto probs = scenario_probs(d.probs, s.activity, p_np, frame.p_rel);

  const std::uint64_t n = 400000;
  const auto f = simulate_scenario_frequencies(s, z, d, n, 17);
  REQUIRE(f.n_slots == n);
  for (int i = 0; i < 10; ++i) {
    const double p = probs.p[static_cast<std::size_t>(i)];
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
    CHECK(std::abs(f.frequency(i).mean - p) <= 3.0 * se);
  }
}

TEST_CASE("episode simulation against the closed-form expectations") {
  const NetworkScenario s = reference_scenario();
  const auto b = evaluate_point(s, 40.0, 1e-4);
  const auto est = simulate_link_trials(s, 40.0, b.expected_distance, b.sensing, 200000, 5);
  CHECK(std::abs(est.energy.mean / b.sft.expected_energy - 1.0) < 0.01);
  CHECK(std::abs(est.time.mean / b.sft.expected_time - 1.0) < 0.01);
  CHECK(std::abs(est.trials.mean / b.sft.expected_trials - 1.0) < 0.01);
  CHECK(est.counts[5] == est.n_episodes);
}

TEST_CASE("forwarding simulation") {
  SUBCASE("range covering the whole field reaches the sink directly") {
    const FieldGeometry field{100.0, 0.01, 100.0};
    const auto h = simulate_hop_progress(field, 20000, 1);
    CHECK(h.n_direct == 20000);
    CHECK(std::abs(h.progress.mean / (200.0 / 3.0) - 1.0) < 0.02);
  }
  SUBCASE("dense field") {
    const FieldGeometry field{1000.0, 0.1, 100.0};
    const auto h = simulate_hop_progress(field, 20000, 2);
    const double w = expected_hop_progress(100.0, 1000.0);
    CHECK(std::abs(h.progress.mean / w - 1.0) < 0.02);
    CHECK(std::abs(h.distance.mean / expected_hop_distance(h.progress.mean, 100.0) - 1.0) < 0.05);
    CHECK(h.n_direct + h.n_forwarded + h.n_empty == 20000);
  }
  CHECK_THROWS_AS(simulate_hop_progress({1000.0, 1e-5, 100.0}, 100, 1), DomainError);
}

TEST_CASE("guardring area estimate") {
  const double r = 100.0;
  const auto one = estimate_guardring_area(0.0, r, 1000000, 8);
  CHECK(within_se(one, kPi * r * r));
  const auto two = estimate_guardring_area(2.0 * r, r, 1000000, 8);
  CHECK(within_se(two, 2.0 * kPi * r * r));
  const auto mid = estimate_guardring_area(60.0, r, 10000000, 8);
  CHECK(std::abs(mid.mean / guardring_area(60.0, r).area - 1.0) < 0.005);
  CHECK_THROWS_AS(estimate_guardring_area(60.0, r, 9999, 8), DomainError);
}

TEST_CASE("standard error shrinks like one over root n") {
  const auto a = estimate_guardring_area(60.0, 100.0, 100000, 4);
  const auto b = estimate_guardring_area(60.0, 100.0, 400000, 4);
  CHECK(a.std_error / b.std_error == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("results do not depend on the worker count") {
  const NetworkScenario s = reference_scenario();
  const auto b = evaluate_point(s, 40.0, 1e-4);

  const auto l1 = simulate_link_trials(s, 40.0, b.expected_distance, b.sensing, 30000, 9, 1);
  const auto l4 = simulate_link_trials(s, 40.0, b.expected_distance, b.sensing, 30000, 9, 4);
  CHECK(same_bits(l1.energy.mean, l4.energy.mean));
  CHECK(same_bits(l1.energy.std_error, l4.energy.std_error));
  CHECK(l1.counts == l4.counts);

  const auto h1 = simulate_hop_progress({1000.0, 0.01, 100.0}, 20000, 9, 1);
  const auto h4 = simulate_hop_progress({1000.0, 0.01, 100.0}, 20000, 9, 4);
  CHECK(same_bits(h1.progress.mean, h4.progress.mean));
  CHECK(same_bits(h1.distance.std_error, h4.distance.std_error));

  const auto a1 = estimate_guardring_area(30.0, 100.0, 50000, 9, 1);
  const auto a4 = estimate_guardring_area(30.0, 100.0, 50000, 9, 4);
  CHECK(same_bits(a1.mean, a4.mean));

  const auto other = estimate_guardring_area(30.0, 100.0, 50000, 10, 1);
  CHECK_FALSE(same_bits(a1.mean, other.mean));
}
