#include "crsn/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "crsn/errors.hpp"
#include "crsn/parallel.hpp"

namespace crsn {

using detail::format_value;

namespace {

constexpr double kTauFloor = 1e-5;   // s, lower end of the tau_t grid
constexpr double kRsFloor = 1.0;     // m, lower end of the r_s grid
constexpr double kInnerShare = 0.999;
constexpr double kStopFraction = 1e-4;
constexpr int kMaxPolls = 100000;

const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kWorst = -std::numeric_limits<double>::infinity();

// Lambda, or -inf where the pipeline rejects the point.
double safe_reward(const NetworkScenario& s, double r_s, double tau_t) {
  try {
    const double v = reward(s, r_s, tau_t);
    return std::isfinite(v) ? v : kWorst;
  } catch (const std::exception&) {
    return kWorst;
  }
}

void check_axis(int n, const char* name) {
  if (n != 1 && n < 32) {
    throw DomainError(std::string(name) + " needs at least 32 points (or exactly 1), got " +
                      std::to_string(n));
  }
}

Eigen::VectorXd linear_axis(double lo, double hi, int n) {
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

Eigen::VectorXd log_axis(double lo, double hi, int n) {
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  Eigen::VectorXd out = Eigen::VectorXd::LinSpaced(n, std::log(lo), std::log(hi));
  out = out.array().exp();
  // Pin the ends so exp(log(x)) rounding cannot push past tau_max.
  out(0) = lo;
  out(n - 1) = hi;
  return out;
}

struct Box {
  Eigen::Vector2d lo;
  Eigen::Vector2d hi;
  Eigen::Vector2d clamp(Eigen::Vector2d x) const { return x.cwiseMax(lo).cwiseMin(hi); }
};

}  // namespace

OptimizationResult optimize(const NetworkScenario& scenario, const GridSpec& grid,
                            unsigned workers) {
  scenario.validate();
  check_axis(grid.n_rs, "r_s grid");
  check_axis(grid.n_tau_t, "tau_t grid");

  const double cap = scenario.r_s_cap();
  const double tau_max = scenario.tau_max();
  const double r_hi = kInnerShare * cap;
  const double t_hi = kInnerShare * tau_max;
  const double r_lo = std::min(kRsFloor, 0.5 * r_hi);
  const double t_lo = std::min(kTauFloor, 0.5 * t_hi);

  OptimizationResult out;
  out.r_values = linear_axis(r_lo, r_hi, grid.n_rs);
  out.tau_values = log_axis(t_lo, t_hi, grid.n_tau_t);
  out.lambda.resize(grid.n_rs, grid.n_tau_t);

  parallel_for(static_cast<std::size_t>(grid.n_rs), workers, [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index j = 0; j < out.tau_values.size(); ++j) {
      const double v = safe_reward(scenario, out.r_values(row), out.tau_values(j));
      out.lambda(row, j) = std::isfinite(v) ? v : kNaN;
    }
  });
  out.evaluations = static_cast<long>(out.lambda.size());

  Eigen::Index bi = -1;
  Eigen::Index bj = -1;
  double best = kWorst;
  for (Eigen::Index i = 0; i < out.lambda.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.lambda.cols(); ++j) {
      const double v = out.lambda(i, j);
      if (std::isfinite(v) && v > best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  }
  if (bi < 0) throw DomainError("no feasible point on the (r_s, tau_t) grid");

  out.grid_r_s = out.r_values(bi);
  out.grid_tau_t = out.tau_values(bj);
  out.grid_lambda = best;

  // Iterate in (r_s, ln tau_t).
  Eigen::Vector2d x(out.grid_r_s, std::log(out.grid_tau_t));
  const Box box{{1e-4 * cap, std::log(1e-4 * t_lo)}, {r_hi, std::log(t_hi)}};
  const double rs_range = r_hi - r_lo;
  const double lt_range = std::log(t_hi / t_lo);
  const Eigen::Vector2d tol(kStopFraction * rs_range, kStopFraction * lt_range);

  const bool refine = grid.n_rs > 1 && grid.n_tau_t > 1;
  Eigen::Vector2d step(rs_range / (grid.n_rs > 1 ? grid.n_rs - 1 : 1),
                       lt_range / (grid.n_tau_t > 1 ? grid.n_tau_t - 1 : 1));
  const auto eval = [&](const Eigen::Vector2d& p) {
    ++out.evaluations;
    return safe_reward(scenario, p(0), std::exp(p(1)));
  };

  bool converged = false;
  if (refine) {
    for (int poll = 0; poll < kMaxPolls; ++poll) {
      bool moved = false;
      for (int axis = 0; axis < 2 && !moved; ++axis) {
        for (const double dir : {1.0, -1.0}) {
          Eigen::Vector2d trial = x;
          trial(axis) += dir * step(axis);
          trial = box.clamp(trial);
          if (trial == x) continue;
          const double v = eval(trial);
          if (v > best) {
            best = v;
            x = trial;
            moved = true;
            break;
          }
        }
      }
      if (moved) continue;
      // A failed poll at a step already under tolerance certifies x.
      if ((step.array() <= tol.array()).all()) {
        converged = true;
        break;
      }
      step *= 0.5;
    }
  }

  out.converged = converged;
  out.final_step_r_s = step(0);
  out.final_step_log_tau = step(1);
  out.r_s_star = x(0);
  out.tau_t_star = refine ? std::exp(x(1)) : out.grid_tau_t;
  out.lambda_star = best;

  if (refine) {
    out.boundary.r_s_upper = x(0) >= box.hi(0) - step(0);
    out.boundary.r_s_lower = x(0) <= box.lo(0) + step(0);
    out.boundary.tau_t_upper = x(1) >= box.hi(1) - step(1);
    out.boundary.tau_t_lower = x(1) <= box.lo(1) + step(1);
  }

  out.at_optimum = evaluate_point(scenario, out.r_s_star, out.tau_t_star);
  out.tau_s_at_opt = out.at_optimum.sensing.tau_s;
  return out;
}

const char* parameter_name(SensitivityParameter p) {
  switch (p) {
    case SensitivityParameter::kappa: return "kappa";
    case SensitivityParameter::beta: return "beta";
    case SensitivityParameter::alpha: return "alpha";
    case SensitivityParameter::rho_p: return "rho_p";
    case SensitivityParameter::r_p: return "r_p";
    case SensitivityParameter::gamma_0: return "gamma_0";
    case SensitivityParameter::p_s: return "p_s";
    case SensitivityParameter::p_col: return "p_col";
    case SensitivityParameter::gamma_p: return "gamma_p";
  }
  return "?";
}

const std::vector<SensitivityParameter>& all_sensitivity_parameters() {
  static const std::vector<SensitivityParameter> params{
      SensitivityParameter::kappa,   SensitivityParameter::beta,  SensitivityParameter::alpha,
      SensitivityParameter::rho_p,   SensitivityParameter::r_p,   SensitivityParameter::gamma_0,
      SensitivityParameter::p_s,     SensitivityParameter::p_col, SensitivityParameter::gamma_p};
  return params;
}

const std::vector<double>& default_perturbations() {
  static const std::vector<double> fractions{-0.50, -0.25, -0.10, -0.05,
                                             0.05,  0.10,  0.25,  0.50};
  return fractions;
}

NetworkScenario perturb(const NetworkScenario& base, SensitivityParameter p, double fraction) {
  NetworkScenario s = base;
  const double f = 1.0 + fraction;
  switch (p) {
    case SensitivityParameter::kappa: s.hardware.kappa *= f; break;
    case SensitivityParameter::beta:
      s.activity = PuActivity(base.activity.alpha(), base.activity.beta() * f);
      break;
    case SensitivityParameter::alpha:
      s.activity = PuActivity(base.activity.alpha() * f, base.activity.beta());
      break;
    case SensitivityParameter::rho_p: s.rho_p *= f; break;
    case SensitivityParameter::r_p: s.r_p *= f; break;
    case SensitivityParameter::gamma_0: s.hardware.gamma_0 *= f; break;
    case SensitivityParameter::p_s: s.hardware.p_s *= f; break;
    case SensitivityParameter::p_col: s.p_col *= f; break;
    case SensitivityParameter::gamma_p:
      s.noise = NoiseModel::from_ratio(base.noise.gamma_p() * f, base.noise.sigma_n2());
      break;
  }
  return s;
}

NetworkScenario sensitivity_base(NetworkScenario s) {
  s.r_p = 100.0;
  s.rho_p = 0.001;
  return s;
}

const SensitivityCell& SensitivityReport::cell(SensitivityParameter p,
                                               double perturbation) const {
  for (const auto& c : cells) {
    if (c.parameter == p && std::abs(c.perturbation - perturbation) < 1e-12) return c;
  }
  throw std::out_of_range(std::string("no sensitivity cell for ") + parameter_name(p) + " at " +
                          format_value(perturbation));
}

SensitivityReport sensitivity_analysis(const NetworkScenario& base,
                                       const std::vector<SensitivityParameter>& params,
                                       const std::vector<double>& perturbations,
                                       const GridSpec& grid, unsigned workers) {
  SensitivityReport report;
  report.base = optimize(base, grid, workers);
  const double r0 = report.base.r_s_star;
  const double t0 = report.base.tau_t_star;
  const double l0 = report.base.lambda_star;

  report.cells.resize(params.size() * perturbations.size());
  parallel_for(report.cells.size(), workers, [&](std::size_t k) {
    SensitivityCell& c = report.cells[k];
    c.parameter = params[k / perturbations.size()];
    c.perturbation = perturbations[k % perturbations.size()];
    try {
      const auto res = optimize(perturb(base, c.parameter, c.perturbation), grid, 1);
      c.feasible = true;
      c.r_s_star = res.r_s_star;
      c.tau_t_star = res.tau_t_star;
      c.lambda_star = res.lambda_star;
      c.d_r_s = 100.0 * (res.r_s_star / r0 - 1.0);
      c.d_tau_t = 100.0 * (res.tau_t_star / t0 - 1.0);
      c.d_lambda = 100.0 * (res.lambda_star / l0 - 1.0);
    } catch (const std::exception& e) {
      c.feasible = false;
      c.note = e.what();
    }
  });
  return report;
}

NetworkScenario sweep_base(NetworkScenario s) {
  s.r_p = 100.0;
  return s;
}

std::vector<SweepPoint> parameter_sweep(const NetworkScenario& base, const SweepSpec& spec,
                                        const GridSpec& grid, unsigned workers) {
  std::vector<double> kappas = spec.kappas;
  if (kappas.empty()) {
    for (int i = 0; i <= 14; ++i) kappas.push_back(2.0 + 0.1 * i);
  }
  const std::size_t nk = kappas.size();
  const std::size_t nb = spec.betas.size();
  std::vector<SweepPoint> points(spec.alphas.size() * nb * nk);

  parallel_for(points.size(), workers, [&](std::size_t idx) {
    SweepPoint& pt = points[idx];
    pt.alpha = spec.alphas[idx / (nb * nk)];
    pt.beta = spec.betas[(idx / nk) % nb];
    pt.kappa = kappas[idx % nk];
    try {
      NetworkScenario s = base;
      s.activity = PuActivity(pt.alpha, pt.beta);
      s.hardware.kappa = pt.kappa;
      const auto res = optimize(s, grid, 1);
      pt.feasible = true;
      pt.r_s_star = res.r_s_star;
      pt.tau_t_star = res.tau_t_star;
      pt.lambda_star = res.lambda_star;
      pt.r_s_at_cap = res.boundary.r_s_upper;
    } catch (const std::exception& e) {
      pt.feasible = false;
      pt.note = e.what();
    }
  });
  return points;
}

}  // namespace crsn
