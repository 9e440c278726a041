#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "crsn/errors.hpp"
#include "crsn/link.hpp"
#include "crsn/reward.hpp"
#include "crsn/scenario.hpp"

using namespace crsn;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnionAtZEqualsR = 50548.15608570829631;  // z = r_p = 100, 30-digit arithmetic

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Joint sensing probabilities from conditional error rates.
SensingProbabilities joint(const PuActivity& act, double fa, double md) {
  SensingProbabilities s;
  s.p_fa = act.p_idle() * fa;
  s.p_v = act.p_idle() * (1.0 - fa);
  s.p_md = act.p_busy() * md;
  s.p_d = act.p_busy() * (1.0 - md);
  return s;
}

EnergyComponents some_energies() { return {7e-4, 3e-5, 1.1e-6}; }

}  // namespace

TEST_CASE("guardring union area") {
  const double r = 100.0;
  CHECK(rel(guardring_area(0.0, r).area, kPi * r * r) < 1e-14);
  CHECK(rel(guardring_area(2.0 * r, r).area, 2.0 * kPi * r * r) < 1e-14);
  CHECK(rel(guardring_area(r, r).area, kUnionAtZEqualsR) < 1e-13);
  CHECK_FALSE(guardring_area(2.0 * r, r).disjoint);

  const auto apart = guardring_area(3.0 * r, r);
  CHECK(apart.disjoint);
  CHECK(apart.area == doctest::Approx(2.0 * kPi * r * r).epsilon(1e-15));

  SUBCASE("monotone between one and two disks") {
    double prev = guardring_area(0.0, r).area;
    for (int i = 1; i <= 400; ++i) {
      const double a = guardring_area(2.0 * r * i / 400.0, r).area;
      CHECK(a > prev);
      CHECK(a <= 2.0 * kPi * r * r * (1.0 + 1e-15));
      prev = a;
    }
  }
  SUBCASE("small separation adds a strip of width z") {
    // d S / d z = 2 r at z = 0.
    const double z = 1e-4;
    CHECK(rel(guardring_area(z, r).area - kPi * r * r, 2.0 * r * z) < 1e-4);
  }
  CHECK_THROWS_AS(guardring_area(-1.0, r), DomainError);
  CHECK_THROWS_AS(guardring_area(1.0, 0.0), DomainError);
}

TEST_CASE("no PU arrival probability") {
  CHECK(no_pu_arrival_prob(0.001, 5e4, 0.0, 3.0) == 1.0);
  CHECK(no_pu_arrival_prob(0.0, 5e4, 1e-3, 3.0) == 1.0);
  CHECK(rel(no_pu_arrival_prob(0.001, 5e4, 1e-3, 3.0),
            std::exp(-50.0 * (1.0 - std::exp(-3e-3)))) < 1e-14);
  CHECK(no_pu_arrival_prob(0.001, 5e4, 2e-3, 3.0) < no_pu_arrival_prob(0.001, 5e4, 1e-3, 3.0));
  CHECK_THROWS_AS(no_pu_arrival_prob(-1.0, 5e4, 1e-3, 3.0), DomainError);
}

TEST_CASE("frame reliability") {
  const auto zero_snr = frame_reliability(0.0, 1.0, 10e3, 1e-3);
  CHECK(zero_snr.ber == 0.5);

  const auto no_frame = frame_reliability(100.0, 1.0, 10e3, 0.0);
  CHECK(no_frame.zeta == 0.0);
  CHECK(no_frame.p_rel == 1.0);

  const auto clean = frame_reliability(100.0, 1.0, 10e3, 1e-3);
  CHECK(rel(clean.ber, 0.5 * 2.0884875837625447e-45) < 1e-12);
  CHECK(std::abs(clean.p_rel - 1.0) < 1e-12);
  CHECK(rel(clean.rate, 10e3 * std::log2(101.0)) < 1e-15);
  CHECK(rel(clean.zeta, 1e-3 * clean.rate) < 1e-15);

  const auto noisy = frame_reliability(3.0, 1.0, 10e3, 1e-3);
  CHECK(rel(noisy.p_rel, std::pow(1.0 - noisy.ber, noisy.zeta)) < 1e-12);
  CHECK(frame_reliability(3.0, 0.5, 10e3, 1e-3).p_rel < noisy.p_rel);
}

TEST_CASE("scenario set membership") {
  const ScenarioSet expected[10] = {ScenarioSet::A, ScenarioSet::A, ScenarioSet::A,
                                    ScenarioSet::B, ScenarioSet::B, ScenarioSet::C,
                                    ScenarioSet::A, ScenarioSet::A, ScenarioSet::A,
                                    ScenarioSet::B};
  for (int i = 0; i < 10; ++i) CHECK(scenario_set(i) == expected[i]);
  CHECK_THROWS_AS(scenario_set(10), DomainError);
  CHECK_THROWS_AS(scenario_set(-1), DomainError);
}

TEST_CASE("scenario probabilities") {
  const PuActivity act(3, 3);

  SUBCASE("perfect sensing") {
    const auto p = scenario_probs(joint(act, 0.0, 0.0), act, 0.9, 0.99);
    for (int i : {0, 1, 2, 7, 8, 9}) CHECK(p.p[i] == 0.0);
    CHECK(p.p[5] == doctest::Approx(0.5 * 0.9 * 0.99).epsilon(1e-15));
    CHECK(p.p[6] == 0.5);
    CHECK(p.p_c == p.p[5]);
  }
  SUBCASE("certain PU arrival") {
    const auto p = scenario_probs(joint(act, 0.1, 0.1), act, 0.0, 1.0);
    CHECK(p.p[4] == 0.0);
    CHECK(p.p[5] == 0.0);
    CHECK(p.p[3] == doctest::Approx(0.5 * 0.81).epsilon(1e-15));
  }
  SUBCASE("normalized over random draws") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
      const PuActivity a(0.1 + 50.0 * u(gen), 0.1 + 50.0 * u(gen));
      const auto p = scenario_probs(joint(a, u(gen), u(gen)), a, u(gen), u(gen));
      double total = 0.0;
      for (double v : p.p) total += v;
      CHECK(std::abs(total - 1.0) < 1e-9);
      CHECK(std::abs(p.p_a + p.p_b + p.p_c - 1.0) < 1e-9);
    }
  }
  SUBCASE("inconsistent marginals are caught") {
    SensingProbabilities bad = joint(act, 0.1, 0.1);
    bad.p_v = 0.3;
    CHECK_THROWS_AS(scenario_probs(bad, act, 0.9, 0.9), ConsistencyError);
  }
  CHECK_THROWS_AS(scenario_probs(joint(act, 0.1, 0.1), act, 1.5, 0.9), ConsistencyError);
}

TEST_CASE("distribution of slots until success") {
  const PuActivity act(3, 3);
  const auto p = scenario_probs(joint(act, 0.05, 0.05), act, 0.8, 0.95);

  CHECK(trials_pmf(p, 1) == p.p_c);
  CHECK(rel(trials_pmf(p, 2), p.p_c * (p.p_a + p.p_b)) < 1e-15);

  double mass = 0.0;
  for (std::int64_t t = 1; t <= 2000; ++t) mass += trials_pmf(p, t);
  CHECK(std::abs(mass - 1.0) < 1e-12);

  for (std::int64_t t = 1; t <= 200; ++t) {
    CHECK(std::abs(trials_pmf_binomial(p, t) - trials_pmf(p, t)) < 1e-12);
  }
  CHECK_THROWS_AS(trials_pmf(p, 0), DomainError);
  CHECK_THROWS_AS(trials_pmf_binomial(p, 0), DomainError);
}

TEST_CASE("expected energy and time to success") {
  const PuActivity act(3, 3);
  const EnergyComponents e = some_energies();
  const double tau_s = 1e-3;
  const double tau_t = 2e-4;

  SUBCASE("certain success costs one attempt") {
    const PuActivity always_idle(1e6, 1e-6);
    const auto p = scenario_probs(joint(always_idle, 0.0, 0.0), always_idle, 1.0, 1.0);
    const auto x = expected_to_sft(p, e, tau_s, tau_t);
    CHECK(x.expected_trials == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(x.expected_time == doctest::Approx(tau_s + tau_t).epsilon(1e-9));
    CHECK(x.expected_energy == doctest::Approx(2 * e.e_s + e.e_t + e.e_r).epsilon(1e-9));
  }
  SUBCASE("only set A failures") {
    const auto p = scenario_probs(joint(act, 0.0, 0.0), act, 1.0, 1.0);
    const auto x = expected_to_sft(p, e, tau_s, tau_t);
    CHECK(x.expected_trials == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x.expected_time == doctest::Approx(2 * tau_s + tau_t).epsilon(1e-14));
    CHECK(x.expected_energy == doctest::Approx(4 * e.e_s + e.e_t + e.e_r).epsilon(1e-14));
  }
  SUBCASE("series matches closed form") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const PuActivity a(1.0 + 20.0 * u(gen), 1.0 + 20.0 * u(gen));
      const auto p = scenario_probs(joint(a, 0.3 * u(gen), 0.3 * u(gen)), a,
                                    0.3 + 0.7 * u(gen), 0.5 + 0.5 * u(gen));
      if (p.p_c < 0.05) continue;
      const auto closed = expected_to_sft(p, e, tau_s, tau_t);
      const auto series = expected_to_sft_series(p, e, tau_s, tau_t);
      CHECK(rel(series.expected_energy, closed.expected_energy) < 1e-9);
      CHECK(rel(series.expected_time, closed.expected_time) < 1e-9);
      CHECK(rel(series.expected_trials, closed.expected_trials) < 1e-9);
    }
  }
  SUBCASE("unreachable and overlong cases") {
    const auto never = scenario_probs(joint(act, 0.1, 0.1), act, 0.0, 1.0);
    CHECK_THROWS_AS(expected_to_sft(never, e, tau_s, tau_t), UnreachableSft);
    CHECK_THROWS_AS(expected_to_sft_series(never, e, tau_s, tau_t), UnreachableSft);
    const auto rare = scenario_probs(joint(act, 0.1, 0.1), act, 1e-6, 1.0);
    CHECK_THROWS_AS(expected_to_sft_series(rare, e, tau_s, tau_t, 1e-12, 1000), DomainError);
  }
}

TEST_CASE("efficiencies") {
  const auto eq = efficiencies(1e-3, 1e-3, 2e-3);
  CHECK(eq.theta == 0.5);
  CHECK(eq.theta_prose == 0.5);
  CHECK(eq.omega == 0.5);
  const auto x = efficiencies(1e-3, 3e-4, 5e-3);
  CHECK(x.theta + x.theta_prose == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(efficiencies(0.0, 1e-3, 1e-3), DomainError);
}

TEST_CASE("success probability falls with transmission duration") {
  const NetworkScenario s = reference_scenario();
  double prev = 1.0;
  for (int i = 1; i <= 60; ++i) {
    const double tau_t = s.tau_max() * i / 61.0;
    const double p = evaluate_point(s, 40.0, tau_t).scenarios.p_c;
    CHECK(p <= prev);
    prev = p;
  }
}
