#ifndef CRSN_OPTIMIZER_HPP
#define CRSN_OPTIMIZER_HPP

// Maximization of the reward over (r_s, tau_t): a coarse grid followed by a
// coordinate pattern search, plus the one-at-a-time sensitivity study and the
// (alpha, beta, kappa) sweep built on it.

#include <Eigen/Core>
#include <string>
#include <vector>

#include "crsn/reward.hpp"
#include "crsn/scenario.hpp"

namespace crsn {

/// Grid resolution. Each axis needs at least 32 points, or exactly 1 for a
/// degenerate single-value axis (which disables refinement).
struct GridSpec {
  int n_rs = 64;
  int n_tau_t = 64;
};

/// Which bounds the optimum sits within one final refinement step of.
struct BoundaryFlags {
  bool r_s_upper = false;    ///< r_s cap, min(r_p, Gamma)
  bool r_s_lower = false;
  bool tau_t_upper = false;  ///< tau_max
  bool tau_t_lower = false;
  bool any() const noexcept { return r_s_upper || r_s_lower || tau_t_upper || tau_t_lower; }
};

struct OptimizationResult {
  double r_s_star = 0.0;
  double tau_t_star = 0.0;
  double lambda_star = 0.0;
  double tau_s_at_opt = 0.0;
  // Best grid sample before refinement.
  double grid_r_s = 0.0;
  double grid_tau_t = 0.0;
  double grid_lambda = 0.0;
  // Surface samples: lambda(i, j) at (r_values[i], tau_values[j]); NaN where
  // the point could not be evaluated.
  Eigen::VectorXd r_values;
  Eigen::VectorXd tau_values;
  Eigen::ArrayXXd lambda;
  bool converged = false;
  BoundaryFlags boundary;
  double final_step_r_s = 0.0;      ///< m
  double final_step_log_tau = 0.0;  ///< in ln(tau_t)
  long evaluations = 0;
  RewardBreakdown at_optimum;
};

/// Grid search on [1 m, 0.999 cap] x log[1e-5 s, 0.999 tau_max] then pattern
/// search in (r_s, ln tau_t) with step halving until both steps fall below
/// 1e-4 of the grid extent. `workers` only changes wall time, never results.
OptimizationResult optimize(const NetworkScenario& scenario, const GridSpec& grid = {},
                            unsigned workers = 1);

enum class SensitivityParameter {
  kappa,
  beta,
  alpha,
  rho_p,
  r_p,
  gamma_0,
  p_s,
  p_col,
  gamma_p,
};

const char* parameter_name(SensitivityParameter p);
const std::vector<SensitivityParameter>& all_sensitivity_parameters();
/// -50, -25, -10, -5, +5, +10, +25, +50 percent, as fractions.
const std::vector<double>& default_perturbations();

/// Copy of `base` with one parameter scaled by (1 + fraction). gamma_0 is
/// scaled in linear units.
NetworkScenario perturb(const NetworkScenario& base, SensitivityParameter p, double fraction);

/// Base scenario of the sensitivity study: r_p = 100 m, rho_p = 0.001.
NetworkScenario sensitivity_base(NetworkScenario s);

struct SensitivityCell {
  SensitivityParameter parameter;
  double perturbation = 0.0;  ///< fraction, e.g. -0.25
  bool feasible = false;
  std::string note;  ///< reason when infeasible
  double r_s_star = 0.0;
  double tau_t_star = 0.0;
  double lambda_star = 0.0;
  // Percent change against the base optimum.
  double d_r_s = 0.0;
  double d_tau_t = 0.0;
  double d_lambda = 0.0;
};

struct SensitivityReport {
  OptimizationResult base;
  std::vector<SensitivityCell> cells;  ///< parameter-major, perturbation-minor order

  const SensitivityCell& cell(SensitivityParameter p, double perturbation) const;
};

SensitivityReport sensitivity_analysis(const NetworkScenario& base,
                                       const std::vector<SensitivityParameter>& params,
                                       const std::vector<double>& perturbations,
                                       const GridSpec& grid = {}, unsigned workers = 1);

struct SweepSpec {
  std::vector<double> alphas{10.0, 20.0, 30.0};
  std::vector<double> betas{10.0, 20.0, 30.0};
  std::vector<double> kappas;  ///< empty means 2.0, 2.1, ..., 3.4
};

/// Base scenario of the sweep: r_p = 100 m.
NetworkScenario sweep_base(NetworkScenario s);

struct SweepPoint {
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
  bool feasible = false;
  std::string note;
  double r_s_star = 0.0;
  double tau_t_star = 0.0;
  double lambda_star = 0.0;
  bool r_s_at_cap = false;
};

/// Optimum for every (alpha, beta, kappa); alpha-major, then beta, then kappa.
/// Failing cells are recorded and the sweep carries on.
std::vector<SweepPoint> parameter_sweep(const NetworkScenario& base, const SweepSpec& spec = {},
                                        const GridSpec& grid = {}, unsigned workers = 1);

}  // namespace crsn

#endif  // CRSN_OPTIMIZER_HPP
