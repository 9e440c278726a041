#include <cmath>
#include <cstring>

#include "doctest.h"

#include "crsn/errors.hpp"
#include "crsn/optimizer.hpp"
#include "crsn/reward.hpp"

using namespace crsn;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("reward at the illustrated operating point") {
  const NetworkScenario s = reference_scenario();
  const auto b = evaluate_point(s, 40.0, 1e-4);
  CHECK(b.lambda > 6.8e7 / 2.0);
  CHECK(b.lambda < 6.8e7 * 2.0);
  CHECK(b.lambda == doctest::Approx(reward(s, 40.0, 1e-4)).epsilon(1e-15));
  CHECK(b.sensing.tau_f == doctest::Approx(b.sensing.tau_s + 1e-4).epsilon(1e-15));
}

TEST_CASE("reward vanishes at the collision limit") {
  const NetworkScenario s = reference_scenario();
  const double near_limit = reward(s, 40.0, 0.999 * s.tau_max());
  CHECK(near_limit < 1e-3 * reward(s, 40.0, 1e-4));
}

TEST_CASE("more sensing power lowers the reward") {
  NetworkScenario s = reference_scenario();
  const double base = reward(s, 40.0, 1e-4);
  s.hardware.p_s *= 2.0;
  CHECK(reward(s, 40.0, 1e-4) < base);
}

TEST_CASE("constraint violations are named") {
  const NetworkScenario s = reference_scenario();
  try {
    evaluate_point(s, s.r_p, 1e-4);
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    CHECK(e.constraint() == "r_s < r_p");
  }
  try {
    evaluate_point(s, 40.0, s.tau_max());
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    CHECK(e.constraint() == "tau_t < tau_max");
  }
  CHECK_THROWS_AS(evaluate_point(s, 0.0, 1e-4), DomainError);
  CHECK_THROWS_AS(evaluate_point(s, 40.0, 0.0), DomainError);
}

TEST_CASE("optimizer on the reference scenario") {
  const NetworkScenario s = reference_scenario();
  const auto r = optimize(s);

  CHECK(r.converged);
  CHECK(r.lambda_star >= r.grid_lambda);
  CHECK(r.lambda_star == r.at_optimum.lambda);
  CHECK(r.r_s_star > 0.0);
  CHECK(r.r_s_star < s.r_s_cap());
  CHECK(r.tau_t_star < s.tau_max());
  CHECK(r.lambda.rows() == 64);
  CHECK(r.lambda.cols() == 64);
  CHECK(r.tau_s_at_opt == r.at_optimum.sensing.tau_s);

  SUBCASE("grid maximum is no better than the refined optimum") {
    CHECK(r.lambda.maxCoeff() <= r.lambda_star);
  }
  SUBCASE("no improving neighbor at the final step") {
    const double hr = r.final_step_r_s;
    const double ht = r.final_step_log_tau;
    CHECK(hr > 0.0);
    CHECK(ht > 0.0);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dt = -1; dt <= 1; ++dt) {
        if (dr == 0 && dt == 0) continue;
        const double rs = r.r_s_star + dr * hr;
        const double tt = r.tau_t_star * std::exp(dt * ht);
        if (dr != 0 && dt != 0) continue;
        CHECK(reward(s, rs, tt) <= r.lambda_star);
      }
    }
  }
  SUBCASE("repeatable and independent of the worker count") {
    const auto again = optimize(s, {}, 1);
    const auto parallel = optimize(s, {}, 4);
    for (const auto* o : {&again, &parallel}) {
      CHECK(same_bits(o->r_s_star, r.r_s_star));
      CHECK(same_bits(o->tau_t_star, r.tau_t_star));
      CHECK(same_bits(o->lambda_star, r.lambda_star));
      CHECK(o->evaluations == r.evaluations);
    }
  }
}

TEST_CASE("grid specification") {
  const NetworkScenario s = reference_scenario();
  CHECK_THROWS_AS(optimize(s, {16, 64}), DomainError);
  CHECK_THROWS_AS(optimize(s, {64, 0}), DomainError);

  const auto degenerate = optimize(s, {1, 1});
  CHECK_FALSE(degenerate.converged);
  CHECK(degenerate.evaluations == 1);
  CHECK(degenerate.r_s_star == 1.0);
  CHECK(degenerate.tau_t_star == doctest::Approx(1e-5).epsilon(1e-12));
}

TEST_CASE("free-space path loss pushes the range to its cap") {
  NetworkScenario s = sweep_base(reference_scenario());
  s.activity = PuActivity(10, 10);
  s.hardware.kappa = 2.0;
  const auto r = optimize(s);
  CHECK((r.r_s_star >= 0.99 * s.r_s_cap() || r.boundary.r_s_upper));
}

TEST_CASE("parameter perturbation") {
  const NetworkScenario base = sensitivity_base(reference_scenario());
  CHECK(base.r_p == 100.0);
  CHECK(base.rho_p == 0.001);

  CHECK(perturb(base, SensitivityParameter::kappa, 0.1).hardware.kappa ==
        doctest::Approx(2.75).epsilon(1e-15));
  CHECK(perturb(base, SensitivityParameter::gamma_0, -0.5).hardware.gamma_0 ==
        doctest::Approx(50.0).epsilon(1e-15));
  CHECK(perturb(base, SensitivityParameter::beta, 0.5).activity.beta() == 4.5);
  CHECK(perturb(base, SensitivityParameter::beta, 0.5).activity.alpha() == 3.0);
  CHECK(perturb(base, SensitivityParameter::gamma_p, 0.25).noise.gamma_p() ==
        doctest::Approx(12.5).epsilon(1e-15));
  CHECK(perturb(base, SensitivityParameter::p_col, -0.25).p_col ==
        doctest::Approx(0.03).epsilon(1e-15));
  CHECK(default_perturbations().size() == 8);
  CHECK(all_sensitivity_parameters().size() == 9);
}

TEST_CASE("sensitivity directions") {
  const NetworkScenario base = sensitivity_base(reference_scenario());
  const auto report = sensitivity_analysis(
      base, {SensitivityParameter::kappa, SensitivityParameter::gamma_0}, {-0.5, 0.1});

  const auto& k = report.cell(SensitivityParameter::kappa, 0.1);
  REQUIRE(k.feasible);
  CHECK(k.d_r_s < 0.0);
  CHECK(k.d_tau_t > 0.0);
  CHECK(k.d_lambda < 0.0);

  const auto& low_k = report.cell(SensitivityParameter::kappa, -0.5);
  CHECK_FALSE(low_k.feasible);
  CHECK_FALSE(low_k.note.empty());

  // The receiver SNR does not enter the sensing and collision terms, so the
  // optimal duration barely moves.
  const auto& g = report.cell(SensitivityParameter::gamma_0, 0.1);
  REQUIRE(g.feasible);
  CHECK(std::abs(g.d_tau_t) < 2.0);
  CHECK(g.d_r_s < 0.0);
}

TEST_CASE("parameter sweep layout") {
  SweepSpec spec;
  spec.alphas = {10.0};
  spec.betas = {10.0, 30.0};
  spec.kappas = {2.0, 3.0};
  const auto pts = parameter_sweep(sweep_base(reference_scenario()), spec);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].beta == 10.0);
  CHECK(pts[0].kappa == 2.0);
  CHECK(pts[1].kappa == 3.0);
  CHECK(pts[2].beta == 30.0);
  for (const auto& p : pts) CHECK(p.feasible);
  CHECK(pts[1].r_s_star < pts[0].r_s_star);
}
