#include "crsn/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "crsn/cli/config.hpp"
#include "crsn/cli/report.hpp"
#include "crsn/errors.hpp"
#include "crsn/geometry.hpp"
#include "crsn/link.hpp"
#include "crsn/montecarlo.hpp"
#include "crsn/optimizer.hpp"
#include "crsn/reward.hpp"

namespace crsn::cli {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Density of the hop-progress check in `validate`: the high-density regime in
// which the simplified progress formula is meant to hold.
constexpr double kValidateHopDensity = 0.1;
constexpr double kValidateHopRange = 100.0;
constexpr std::uint64_t kValidateHopTrialCap = 100000;
constexpr std::uint64_t kMinAreaSamples = 10000;

struct Context {
  const CommandOptions& opt;
  Config config;
  Format format;
  GridSpec grid;
};

EvaluatePoint point_of(const Context& ctx) {
  EvaluatePoint p = ctx.config.evaluate_point();
  if (ctx.opt.r_s) p.r_s = *ctx.opt.r_s;
  if (ctx.opt.tau_t) p.tau_t = *ctx.opt.tau_t;
  return p;
}

std::uint64_t require(const std::optional<std::uint64_t>& v, const char* flag,
                      const std::string& command) {
  if (!v) throw ConfigError(command + " requires " + flag);
  return *v;
}

void emit(const Context& ctx, const Table& table, std::ostream& out, const std::string& path) {
  if (path.empty()) {
    write_table(out, table, ctx.format);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  write_table(file, table, ctx.format);
  if (!file) throw ConfigError("failed writing '" + path + "'");
}

// ---- evaluate ----

Table breakdown_table(const RewardBreakdown& b) {
  Table t;
  t.kind = "evaluate";
  t.columns = {"r_s", "tau_t", "tau_max", "tau_s", "tau_f", "delta", "p_fa", "p_d", "p_v",
               "p_md", "expected_progress", "expected_distance", "phi_max", "guardring_area",
               "p_np", "gamma", "ber", "rate", "zeta", "p_rel"};
  for (int i = 1; i <= 10; ++i) t.columns.push_back("p_s" + std::to_string(i));
  for (const char* c : {"p_a", "p_b", "p_c", "e_s", "e_t", "e_r", "expected_energy",
                        "expected_time", "expected_trials", "theta", "theta_prose", "omega",
                        "lambda"}) {
    t.columns.emplace_back(c);
  }
  const auto& s = b.sensing;
  std::vector<Cell> row{b.r_s,
                        b.tau_t,
                        b.tau_max,
                        s.tau_s,
                        s.tau_f,
                        s.delta,
                        s.probs.p_fa,
                        s.probs.p_d,
                        s.probs.p_v,
                        s.probs.p_md,
                        b.expected_progress,
                        b.expected_distance,
                        b.phi_max,
                        b.guardring_area,
                        b.scenarios.p_np,
                        b.frame.gamma,
                        b.frame.ber,
                        b.frame.rate,
                        b.frame.zeta,
                        b.frame.p_rel};
  for (double p : b.scenarios.p) row.emplace_back(p);
  for (double v : {b.scenarios.p_a, b.scenarios.p_b, b.scenarios.p_c, b.energies.e_s,
                   b.energies.e_t, b.energies.e_r, b.sft.expected_energy, b.sft.expected_time,
                   b.sft.expected_trials, b.efficiency.theta, b.efficiency.theta_prose,
                   b.efficiency.omega, b.lambda}) {
    row.emplace_back(v);
  }
  t.add(std::move(row));
  return t;
}

int cmd_evaluate(const Context& ctx, std::ostream& out) {
  const auto p = point_of(ctx);
  const auto s = ctx.config.apply_overrides(ctx.config.scenario(), "evaluate");
  emit(ctx, breakdown_table(evaluate_point(s, p.r_s, p.tau_t)), out, ctx.opt.out_path);
  return kExitOk;
}

// ---- optimize ----

int cmd_optimize(const Context& ctx, std::ostream& out) {
  const auto s = ctx.config.apply_overrides(ctx.config.scenario(), "optimize");
  const auto r = optimize(s, ctx.grid, ctx.opt.workers);
  Table t;
  t.kind = "optimize";
  t.columns = {"r_s_star",      "tau_t_star",     "lambda_star",        "tau_s_at_opt",
               "grid_r_s",      "grid_tau_t",     "grid_lambda",        "converged",
               "r_s_upper",     "r_s_lower",      "tau_t_upper",        "tau_t_lower",
               "final_step_r_s", "final_step_log_tau", "evaluations", "n_rs", "n_tau_t",
               "omega_at_opt", "p_c_at_opt"};
  t.add({r.r_s_star, r.tau_t_star, r.lambda_star, r.tau_s_at_opt, r.grid_r_s, r.grid_tau_t,
         r.grid_lambda, r.converged, r.boundary.r_s_upper, r.boundary.r_s_lower,
         r.boundary.tau_t_upper, r.boundary.tau_t_lower, r.final_step_r_s,
         r.final_step_log_tau, static_cast<std::int64_t>(r.evaluations),
         static_cast<std::int64_t>(ctx.grid.n_rs), static_cast<std::int64_t>(ctx.grid.n_tau_t),
         r.at_optimum.efficiency.omega, r.at_optimum.scenarios.p_c});
  emit(ctx, t, out, ctx.opt.out_path);

  if (!ctx.opt.surface_path.empty()) {
    Table surf;
    surf.kind = "surface";
    surf.columns = {"r_s", "tau_t", "lambda"};
    for (Eigen::Index i = 0; i < r.lambda.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.lambda.cols(); ++j) {
        surf.add({r.r_values(i), r.tau_values(j), r.lambda(i, j)});
      }
    }
    emit(ctx, surf, out, ctx.opt.surface_path);
  }
  return kExitOk;
}

// ---- sensitivity ----

int cmd_sensitivity(const Context& ctx, std::ostream& out) {
  const auto base =
      ctx.config.apply_overrides(sensitivity_base(ctx.config.scenario()), "sensitivity");
  const auto rep = sensitivity_analysis(base, all_sensitivity_parameters(),
                                        default_perturbations(), ctx.grid, ctx.opt.workers);
  Table t;
  t.kind = "sensitivity";
  t.columns = {"parameter",   "perturbation_pct", "feasible",    "r_s_star",
               "tau_t_star",  "lambda_star",      "d_r_s_pct",   "d_tau_t_pct",
               "d_lambda_pct", "note"};
  t.add({std::string("base"), 0.0, true, rep.base.r_s_star, rep.base.tau_t_star,
         rep.base.lambda_star, 0.0, 0.0, 0.0, std::string()});
  for (const auto& c : rep.cells) {
    const double pct = std::round(c.perturbation * 1000.0) / 10.0;
    if (c.feasible) {
      t.add({std::string(parameter_name(c.parameter)), pct, true, c.r_s_star, c.tau_t_star,
             c.lambda_star, c.d_r_s, c.d_tau_t, c.d_lambda, std::string()});
    } else {
      t.add({std::string(parameter_name(c.parameter)), pct, false, kNaN, kNaN, kNaN, kNaN,
             kNaN, kNaN, c.note});
    }
  }
  emit(ctx, t, out, ctx.opt.out_path);
  return kExitOk;
}

// ---- sweep ----

int cmd_sweep(const Context& ctx, std::ostream& out) {
  const auto base = ctx.config.apply_overrides(sweep_base(ctx.config.scenario()), "sweep");
  const auto pts = parameter_sweep(base, SweepSpec{}, ctx.grid, ctx.opt.workers);
  Table t;
  t.kind = "sweep";
  t.columns = {"alpha",       "beta",       "kappa",      "feasible", "r_s_star",
               "tau_t_star",  "lambda_star", "r_s_at_cap", "note"};
  for (const auto& p : pts) {
    if (p.feasible) {
      t.add({p.alpha, p.beta, p.kappa, true, p.r_s_star, p.tau_t_star, p.lambda_star,
             p.r_s_at_cap, std::string()});
    } else {
      t.add({p.alpha, p.beta, p.kappa, false, kNaN, kNaN, kNaN, false, p.note});
    }
  }
  emit(ctx, t, out, ctx.opt.out_path);
  return kExitOk;
}

// ---- simulate ----

Table estimate_table(const std::string& kind) {
  Table t;
  t.kind = kind;
  t.columns = {"quantity", "estimate", "std_error", "analytic", "n_samples", "seed"};
  return t;
}

void add_estimate(Table& t, const std::string& name, const SimulationEstimate& e,
                  double analytic) {
  t.add({name, e.mean, e.std_error, analytic, e.n_samples, e.seed});
}

int cmd_simulate(const Context& ctx, std::ostream& out) {
  const std::uint64_t seed = require(ctx.opt.seed, "--seed", "simulate");
  const std::uint64_t n = require(ctx.opt.trials, "--trials", "simulate");
  const auto s = ctx.config.apply_overrides(ctx.config.scenario(), "simulate");
  const auto p = point_of(ctx);
  const auto b = evaluate_point(s, p.r_s, p.tau_t);
  const unsigned w = ctx.opt.workers;

  Table t = estimate_table("simulate");
  if (ctx.opt.kind == "link") {
    const auto est = simulate_link_trials(s, p.r_s, b.expected_distance, b.sensing, n, seed, w);
    add_estimate(t, "p_s6", est.p_s6, b.scenarios.p_c);
    add_estimate(t, "expected_energy", est.energy, b.sft.expected_energy);
    add_estimate(t, "expected_time", est.time, b.sft.expected_time);
    add_estimate(t, "expected_trials", est.trials, b.sft.expected_trials);
    for (int i = 0; i < 10; ++i) {
      add_estimate(t, "freq_s" + std::to_string(i + 1), est.frequency(i),
                   b.scenarios.p[static_cast<std::size_t>(i)]);
    }
  } else if (ctx.opt.kind == "slots") {
    const auto est = simulate_scenario_frequencies(s, b.expected_distance, b.sensing, n, seed, w);
    for (int i = 0; i < 10; ++i) {
      add_estimate(t, "freq_s" + std::to_string(i + 1), est.frequency(i),
                   b.scenarios.p[static_cast<std::size_t>(i)]);
    }
  } else if (ctx.opt.kind == "hop") {
    const auto field = s.field(p.r_s);
    const auto est = simulate_hop_progress(field, n, seed, w);
    add_estimate(t, "progress", est.progress, b.expected_progress);
    add_estimate(t, "distance", est.distance,
                 est.progress.mean > 0.0 && est.progress.mean <= p.r_s
                     ? expected_hop_distance(est.progress.mean, p.r_s)
                     : kNaN);
    const auto count = [&](const char* name, std::uint64_t c) {
      t.add({std::string(name), static_cast<double>(c), 0.0, kNaN, n, seed});
    };
    count("n_direct", est.n_direct);
    count("n_forwarded", est.n_forwarded);
    count("n_empty", est.n_empty);
  } else if (ctx.opt.kind == "area") {
    const auto est = estimate_guardring_area(b.expected_distance, s.r_p, n, seed, w);
    add_estimate(t, "guardring_area", est, b.guardring_area);
  } else {
    throw ConfigError("unknown simulation kind '" + ctx.opt.kind +
                      "' (expected link, slots, hop or area)");
  }
  emit(ctx, t, out, ctx.opt.out_path);
  return kExitOk;
}

// ---- validate ----

struct Check {
  std::string name;
  double observed;
  double expected;
  double tolerance;
  std::string rule;  ///< abs, rel or abs_se
  bool pass;
};

Check within_rel(std::string name, double observed, double expected, double tol) {
  const double err = std::abs(observed - expected) / std::abs(expected);
  return {std::move(name), observed, expected, tol, "rel", err <= tol};
}

Check within_abs(std::string name, double observed, double expected, double tol) {
  return {std::move(name), observed, expected, tol, "abs", std::abs(observed - expected) <= tol};
}

int cmd_validate(const Context& ctx, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = require(ctx.opt.seed, "--seed", "validate");
  const std::uint64_t n = require(ctx.opt.trials, "--trials", "validate");
  const unsigned w = ctx.opt.workers;
  const auto s = ctx.config.apply_overrides(ctx.config.scenario(), "validate");
  const auto p = point_of(ctx);
  const auto b = evaluate_point(s, p.r_s, p.tau_t);
  std::vector<Check> checks;

  // Spectrum balance after the collision-constrained design.
  {
    const auto& pr = b.sensing.probs;
    checks.push_back(within_abs("sensing_balance_p_md", pr.p_md, pr.p_fa, 1e-6 * pr.p_fa));
  }

  // Series form of the SFT expectations against the closed form.
  {
    const auto series =
        expected_to_sft_series(b.scenarios, b.energies, b.sensing.tau_s, b.tau_t);
    checks.push_back(
        within_rel("series_energy", series.expected_energy, b.sft.expected_energy, 1e-9));
    checks.push_back(within_rel("series_time", series.expected_time, b.sft.expected_time, 1e-9));
  }

  // Slot-level scenario frequencies, each within 3 standard errors.
  {
    const auto f = simulate_scenario_frequencies(s, b.expected_distance, b.sensing, n, seed, w);
    for (int i = 0; i < 10; ++i) {
      const double expected = b.scenarios.p[static_cast<std::size_t>(i)];
      const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
      const double observed = f.frequency(i).mean;
      checks.push_back({"slot_freq_s" + std::to_string(i + 1), observed, expected, 3.0 * se,
                        "abs_se", std::abs(observed - expected) <= 3.0 * se});
    }
  }

  // Episode simulation against the SFT expectations.
  {
    const auto e = simulate_link_trials(s, p.r_s, b.expected_distance, b.sensing, n, seed, w);
    checks.push_back(within_rel("episode_energy", e.energy.mean, b.sft.expected_energy, 0.01));
    checks.push_back(within_rel("episode_time", e.time.mean, b.sft.expected_time, 0.01));
    checks.push_back(within_rel("episode_trials", e.trials.mean, b.sft.expected_trials, 0.01));
  }

  // Guardring union area.
  {
    const std::uint64_t m = std::max(n, kMinAreaSamples);
    for (const double frac : {0.0, 0.3, 0.6, 1.0, 2.0}) {
      const double z = frac * s.r_p;
      const auto a = estimate_guardring_area(z, s.r_p, m, seed, w);
      std::ostringstream name;
      name << "guardring_area_z" << frac << "rp";
      checks.push_back(within_rel(name.str(), a.mean, guardring_area(z, s.r_p).area, 0.005));
    }
  }

  // Hop progress and distance at high density.
  {
    FieldGeometry field{s.big_gamma, kValidateHopDensity, std::min(kValidateHopRange, s.big_gamma)};
    const auto h = simulate_hop_progress(field, std::min(n, kValidateHopTrialCap), seed, w);
    const double ew = expected_hop_progress(field.r_s, field.big_gamma);
    checks.push_back(within_rel("hop_progress", h.progress.mean, ew, 0.02));
    const double w_hat = std::min(h.progress.mean, field.r_s);
    checks.push_back(within_rel("hop_distance", h.distance.mean,
                                expected_hop_distance(w_hat, field.r_s), 0.05));
  }

  Table t;
  t.kind = "validate";
  t.columns = {"check", "observed", "expected", "tolerance", "rule", "pass"};
  bool all = true;
  for (const auto& c : checks) {
    t.add({c.name, c.observed, c.expected, c.tolerance, c.rule, c.pass});
    if (!c.pass) {
      all = false;
      err << "validate: " << c.name << " outside tolerance (observed " << format_double(c.observed)
          << ", expected " << format_double(c.expected) << ")\n";
    }
  }
  emit(ctx, t, out, ctx.opt.out_path);
  return all ? kExitOk : kExitValidation;
}

}  // namespace

std::uint64_t parse_count(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 1.0) || v > 9.0e18 || std::floor(v) != v) {
    throw ConfigError(std::string(what) + " must be a positive whole number, got '" + text + "'");
  }
  // Exact for integers written without exponent beyond 2^53.
  if (text.find_first_of(".eE") == std::string::npos) return std::stoull(text);
  return static_cast<std::uint64_t>(v);
}

int run_command(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Context ctx{opt, opt.config_path.empty() ? Config() : Config::load(opt.config_path),
                parse_format(opt.format), GridSpec{opt.grid_rs, opt.grid_tau_t}};

    if (opt.dump_config) {
      const std::string text = ctx.config.dump();
      if (opt.out_path.empty()) {
        out << text;
      } else {
        std::ofstream file(opt.out_path, std::ios::binary | std::ios::trunc);
        if (!file) throw ConfigError("cannot open output file '" + opt.out_path + "'");
        file << text;
      }
      return kExitOk;
    }

    if (opt.command == "evaluate") return cmd_evaluate(ctx, out);
    if (opt.command == "optimize") return cmd_optimize(ctx, out);
    if (opt.command == "sensitivity") return cmd_sensitivity(ctx, out);
    if (opt.command == "sweep") return cmd_sweep(ctx, out);
    if (opt.command == "simulate") return cmd_simulate(ctx, out);
    if (opt.command == "validate") return cmd_validate(ctx, out, err);
    throw ConfigError(opt.command.empty() ? "no command given"
                                          : "unknown command '" + opt.command + "'");
  } catch (const ConstraintViolation& e) {
    err << "error: constraint " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnreachableSft& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace crsn::cli
