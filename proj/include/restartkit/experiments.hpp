#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "restartkit/dynamics.hpp"
#include "restartkit/export.hpp"
#include "restartkit/generators.hpp"
#include "restartkit/objectives.hpp"
#include "restartkit/restart.hpp"
#include "restartkit/solvers.hpp"
#include "restartkit/trace.hpp"

namespace restartkit {

enum class ExperimentKind {
  q_sensitivity,       // scheme1 under a range of q estimates, quadratic
  trajectory_2d,       // iterate paths on a 2-D quadratic
  restart_comparison,  // fixed vs adaptive restart lineup, quadratic
  logsumexp,           // smooth non-strongly-convex instance
  lasso,               // ISTA / FISTA / restarted FISTA
  boxqp                // projected gradient lineup on a box QP
};

inline ExperimentKind parse_experiment(const std::string& s) {
  if (s == "q_sensitivity") return ExperimentKind::q_sensitivity;
  if (s == "trajectory_2d") return ExperimentKind::trajectory_2d;
  if (s == "restart_comparison") return ExperimentKind::restart_comparison;
  if (s == "logsumexp") return ExperimentKind::logsumexp;
  if (s == "lasso") return ExperimentKind::lasso;
  if (s == "boxqp") return ExperimentKind::boxqp;
  throw std::invalid_argument("unknown experiment '" + s + "'");
}

inline std::string experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::q_sensitivity: return "q_sensitivity";
    case ExperimentKind::trajectory_2d: return "trajectory_2d";
    case ExperimentKind::restart_comparison: return "restart_comparison";
    case ExperimentKind::logsumexp: return "logsumexp";
    case ExperimentKind::lasso: return "lasso";
    case ExperimentKind::boxqp: return "boxqp";
  }
  return "q_sensitivity";
}

// Unset numeric fields pick up the experiment's defaults in resolve().
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::q_sensitivity;
  std::uint64_t seed = 0;
  int n = -1;
  int m = -1;
  int s = -1;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double cond = std::numeric_limits<double>::quiet_NaN();
  double noise_sigma = std::numeric_limits<double>::quiet_NaN();
  int max_iters = -1;
  std::optional<RestartPolicy> restart;  // restrict the lineup to one policy

  void apply_param(const std::string& key, double value) {
    if (key == "n") n = static_cast<int>(value);
    else if (key == "m") m = static_cast<int>(value);
    else if (key == "s") s = static_cast<int>(value);
    else if (key == "rho") rho = value;
    else if (key == "cond") cond = value;
    else if (key == "noise_sigma") noise_sigma = value;
    else if (key == "max_iters") max_iters = static_cast<int>(value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(value);
    else throw std::invalid_argument("unknown parameter '" + key + "'");
  }
};

struct RunSummary {
  std::string run_id;
  std::optional<int> iters_to_1e4;
  std::optional<int> iters_to_1e8;
  std::optional<int> iters_to_1e12;
  std::vector<int> restart_intervals;
  std::optional<double> mean_restart_interval;
  std::optional<double> oscillation_period;
  std::optional<double> predicted_restart_interval;
  std::optional<double> predicted_period;
};

struct Summary {
  std::string experiment;
  std::uint64_t seed = 0;
  double f_star_ref = 0.0;
  std::string f_star_source;  // "analytic" or "long_run"
  nlohmann::json params;
  std::vector<RunSummary> runs;

  nlohmann::json to_json() const {
    auto opt_int = [](const std::optional<int>& v) {
      return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    auto opt_dbl = [](const std::optional<double>& v) {
      return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json runs_json = nlohmann::json::array();
    for (const auto& r : runs) {
      runs_json.push_back(
          {{"run_id", r.run_id},
           {"iterations_to",
            {{"1e-4", opt_int(r.iters_to_1e4)},
             {"1e-8", opt_int(r.iters_to_1e8)},
             {"1e-12", opt_int(r.iters_to_1e12)}}},
           {"restart_intervals", r.restart_intervals},
           {"mean_restart_interval", opt_dbl(r.mean_restart_interval)},
           {"oscillation_period", opt_dbl(r.oscillation_period)},
           {"predicted_restart_interval", opt_dbl(r.predicted_restart_interval)},
           {"predicted_oscillation_period", opt_dbl(r.predicted_period)}});
    }
    return {{"experiment", experiment},
            {"seed", seed},
            {"f_star_ref", f_star_ref},
            {"f_star_source", f_star_source},
            {"params", params},
            {"runs", runs_json}};
  }
};

struct ExperimentResult {
  NamedTraces traces;
  Summary summary;
  bool trajectory = false;  // export iterate coordinates instead of f columns
};

namespace detail {

struct Resolved {
  int n, m, s, max_iters;
  double rho, cond, noise_sigma;
};

inline Resolved resolve(const ExperimentConfig& cfg) {
  Resolved r{};
  // Defaults follow the dimensions stated for each figure.
  switch (cfg.experiment) {
    case ExperimentKind::q_sensitivity:
      r = {200, 0, 0, 2500, 0.0, 1.0 / 4.1e-5, 0.0};
      break;
    case ExperimentKind::trajectory_2d:
      r = {2, 0, 0, 150, 0.0, 50.0, 0.0};
      break;
    case ExperimentKind::restart_comparison:
      // Condition number chosen so the fixed-interval bound lands at 700.
      r = {500, 0, 0, 3000, 0.0, 8289.286098242526, 0.0};
      break;
    case ExperimentKind::logsumexp:
      r = {20, 100, 0, 1000, 1.0, 0.0, 0.0};
      break;
    case ExperimentKind::lasso:
      r = {2000, 500, 100, 2000, 1.0, 0.0, 0.1};
      break;
    case ExperimentKind::boxqp:
      r = {500, 0, 0, 3000, 0.0, 1e7, 0.0};
      break;
  }
  if (cfg.n > 0) r.n = cfg.n;
  if (cfg.m > 0) r.m = cfg.m;
  if (cfg.s >= 0) r.s = cfg.s;
  if (cfg.max_iters > 0) r.max_iters = cfg.max_iters;
  if (!std::isnan(cfg.rho)) r.rho = cfg.rho;
  if (!std::isnan(cfg.cond)) r.cond = cfg.cond;
  if (!std::isnan(cfg.noise_sigma)) r.noise_sigma = cfg.noise_sigma;
  return r;
}

inline void fill_tolerance_marks(RunSummary& rs, const Trace& tr, double f_star,
                                 RelDenom denom) {
  rs.iters_to_1e4 = iterations_to_relative(tr, 1e-4, f_star, denom);
  rs.iters_to_1e8 = iterations_to_relative(tr, 1e-8, f_star, denom);
  rs.iters_to_1e12 = iterations_to_relative(tr, 1e-12, f_star, denom);
}

inline void fill_restart_stats(RunSummary& rs, const Trace& tr) {
  rs.restart_intervals = measure_restart_intervals(tr);
  if (!rs.restart_intervals.empty()) {
    double total = 0.0;
    for (int v : rs.restart_intervals) total += v;
    rs.mean_restart_interval = total / static_cast<double>(rs.restart_intervals.size());
  }
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const detail::Resolved p = detail::resolve(cfg);
  ExperimentResult out;
  Summary& summary = out.summary;
  summary.experiment = experiment_name(cfg.experiment);
  summary.seed = cfg.seed;

  const bool quadratic_family =
      cfg.experiment == ExperimentKind::q_sensitivity ||
      cfg.experiment == ExperimentKind::trajectory_2d ||
      cfg.experiment == ExperimentKind::restart_comparison;

  if (quadratic_family) {
    const Quadratic quad = gen_quadratic(p.n, p.cond, cfg.seed);
    Rng x0_rng(derive_seed(cfg.seed, 1));
    const Vector x0 = x0_rng.normal_vector(p.n);
    const double mu = quad.mu();
    const double L = quad.L();
    const double qstar = mu / L;
    summary.f_star_ref = quad.optimal_value();
    summary.f_star_source = "analytic";
    summary.params = {{"n", p.n}, {"cond", p.cond}, {"max_iters", p.max_iters}};

    SolverConfig base;
    base.step_size = 1.0 / L;
    base.max_iters = p.max_iters;
    base.record_iterates = cfg.experiment == ExperimentKind::trajectory_2d;

    struct Entry {
      std::string id;
      double q;
      RestartPolicy policy;
    };
    std::vector<Entry> lineup;
    if (cfg.restart) {
      lineup.push_back({cfg.restart->name(), 0.0, *cfg.restart});
    } else if (cfg.experiment == ExperimentKind::q_sensitivity) {
      lineup = {{"q0", 0.0, RestartPolicy::none()},
                {"qstar_over10", qstar / 10.0, RestartPolicy::none()},
                {"qstar_over3", qstar / 3.0, RestartPolicy::none()},
                {"qstar", qstar, RestartPolicy::none()},
                {"qstar_x3", std::min(1.0, 3.0 * qstar), RestartPolicy::none()},
                {"qstar_x10", std::min(1.0, 10.0 * qstar), RestartPolicy::none()},
                {"q1", 1.0, RestartPolicy::none()}};
    } else if (cfg.experiment == ExperimentKind::trajectory_2d) {
      lineup = {{"qstar", qstar, RestartPolicy::none()},
                {"q0", 0.0, RestartPolicy::none()},
                {"func_restart", 0.0, RestartPolicy::function_adaptive()}};
    } else {
      const int k_bound =
          std::max<int>(1, std::lround(fixed_interval_bound(mu, L)));
      const int k_short = std::max(1, (4 * k_bound) / 7);
      lineup = {
          {"no_restart", 0.0, RestartPolicy::none()},
          {"fixed_" + std::to_string(k_bound), 0.0, RestartPolicy::fixed(k_bound)},
          {"fixed_" + std::to_string(k_short), 0.0, RestartPolicy::fixed(k_short)},
          {"func", 0.0, RestartPolicy::function_adaptive()},
          {"grad", 0.0, RestartPolicy::gradient_adaptive()},
          {"qstar", qstar, RestartPolicy::none()}};
    }

    const int window_start =
        static_cast<int>(std::ceil(3.0 * std::sqrt(L / mu)));
    for (const auto& e : lineup) {
      SolverConfig sc = base;
      sc.q = e.q;
      sc.restart = e.policy;
      Trace tr = accelerated_scheme1(quad, x0, sc);
      tr.f_star_ref = summary.f_star_ref;
      RunSummary rs;
      rs.run_id = e.id;
      detail::fill_tolerance_marks(rs, tr, summary.f_star_ref, RelDenom::initial_gap);
      detail::fill_restart_stats(rs, tr);
      if (e.policy.adaptive())
        rs.predicted_restart_interval = predicted_adaptive_interval(mu, L);
      if (e.policy.kind == RestartKind::none && e.q == 0.0) {
        rs.oscillation_period = measure_oscillation_period(tr, window_start);
        rs.predicted_period = 3.14159265358979323846 * std::sqrt(L / mu);
      }
      summary.runs.push_back(std::move(rs));
      out.traces.push_back({e.id, std::move(tr)});
    }
    out.trajectory = cfg.experiment == ExperimentKind::trajectory_2d;
    return out;
  }

  if (cfg.experiment == ExperimentKind::logsumexp) {
    const LogSumExp f = gen_logsumexp(p.n, p.m, p.rho, cfg.seed);
    const Vector x0 = Vector::Zero(p.n);
    summary.params = {{"n", p.n}, {"m", p.m}, {"rho", p.rho}, {"max_iters", p.max_iters}};

    SolverConfig base;
    base.step_size = std::nullopt;  // step selected by backtracking
    base.backtracking_t0 = 1.0;
    base.max_iters = p.max_iters;

    // Reference optimum from a long restarted run (no analytic value).
    {
      SolverConfig ref = base;
      ref.max_iters = 10 * p.max_iters;
      ref.restart = RestartPolicy::function_adaptive();
      ref.tol = 1e-12;
      const Trace rt = accelerated_scheme1(f, x0, ref);
      double best = rt.records.front().f;
      for (const auto& r : rt.records) best = std::min(best, r.f);
      summary.f_star_ref = best;
      summary.f_star_source = "long_run";
    }

    struct Entry {
      std::string id;
      bool gd;
      RestartPolicy policy;
    };
    std::vector<Entry> lineup;
    if (cfg.restart) {
      lineup.push_back({cfg.restart->name(), false, *cfg.restart});
    } else {
      lineup = {{"gradient_descent", true, RestartPolicy::none()},
                {"accelerated", false, RestartPolicy::none()},
                {"func", false, RestartPolicy::function_adaptive()},
                {"grad", false, RestartPolicy::gradient_adaptive()}};
    }
    for (const auto& e : lineup) {
      SolverConfig sc = base;
      sc.restart = e.policy;
      Trace tr = e.gd ? gradient_descent(f, x0, sc)
                      : accelerated_scheme1(f, x0, sc);
      tr.f_star_ref = summary.f_star_ref;
      RunSummary rs;
      rs.run_id = e.id;
      detail::fill_tolerance_marks(rs, tr, summary.f_star_ref,
                                   RelDenom::optimum_magnitude);
      detail::fill_restart_stats(rs, tr);
      summary.runs.push_back(std::move(rs));
      out.traces.push_back({e.id, std::move(tr)});
    }
    return out;
  }

  if (cfg.experiment == ExperimentKind::lasso) {
    const LassoProblem f =
        gen_lasso(p.n, p.m, p.s, p.rho, p.noise_sigma, cfg.seed);
    const Vector x0 = Vector::Zero(p.n);
    summary.params = {{"n", p.n}, {"m", p.m},
                      {"s", p.s}, {"rho", p.rho},
                      {"noise_sigma", p.noise_sigma}, {"max_iters", p.max_iters}};

    SolverConfig base;
    base.step_size = 1.0 / f.lipschitz();
    base.max_iters = p.max_iters;

    {
      SolverConfig ref = base;
      ref.max_iters = 10 * p.max_iters;
      ref.restart = RestartPolicy::function_adaptive();
      ref.tol = 1e-12;
      const Trace rt = fista(f, x0, ref);
      double best = rt.records.front().f;
      for (const auto& r : rt.records) best = std::min(best, r.f);
      summary.f_star_ref = best;
      summary.f_star_source = "long_run";
    }

    struct Entry {
      std::string id;
      bool use_ista;
      RestartPolicy policy;
    };
    std::vector<Entry> lineup;
    if (cfg.restart) {
      lineup.push_back({cfg.restart->name(), false, *cfg.restart});
    } else {
      lineup = {{"ista", true, RestartPolicy::none()},
                {"fista", false, RestartPolicy::none()},
                {"fista_func", false, RestartPolicy::function_adaptive()},
                {"fista_grad", false, RestartPolicy::gradient_adaptive()}};
    }
    for (const auto& e : lineup) {
      SolverConfig sc = base;
      sc.restart = e.policy;
      Trace tr = e.use_ista ? ista(f, x0, sc) : fista(f, x0, sc);
      tr.f_star_ref = summary.f_star_ref;
      RunSummary rs;
      rs.run_id = e.id;
      detail::fill_tolerance_marks(rs, tr, summary.f_star_ref,
                                   RelDenom::optimum_magnitude);
      detail::fill_restart_stats(rs, tr);
      summary.runs.push_back(std::move(rs));
      out.traces.push_back({e.id, std::move(tr)});
    }
    return out;
  }

  // boxqp
  {
    const BoxQP f = gen_boxqp(p.n, p.cond, cfg.seed);
    const Vector x0 = Vector::Zero(p.n);
    summary.params = {{"n", p.n}, {"cond", p.cond}, {"max_iters", p.max_iters}};

    SolverConfig base;
    base.step_size = 1.0 / f.L();
    base.max_iters = p.max_iters;

    {
      SolverConfig ref = base;
      ref.max_iters = 10 * p.max_iters;
      ref.restart = RestartPolicy::function_adaptive();
      ref.tol = 1e-12;
      const Trace rt = accel_projected_gradient(f, x0, ref);
      double best = rt.records.front().f;
      for (const auto& r : rt.records) best = std::min(best, r.f);
      summary.f_star_ref = best;
      summary.f_star_source = "long_run";
    }

    struct Entry {
      std::string id;
      bool plain_pg;
      RestartPolicy policy;
    };
    std::vector<Entry> lineup;
    if (cfg.restart) {
      lineup.push_back({cfg.restart->name(), false, *cfg.restart});
    } else {
      lineup = {{"projected_gradient", true, RestartPolicy::none()},
                {"accelerated", false, RestartPolicy::none()},
                {"apg_func", false, RestartPolicy::function_adaptive()},
                {"apg_grad", false, RestartPolicy::gradient_adaptive()}};
    }
    for (const auto& e : lineup) {
      SolverConfig sc = base;
      sc.restart = e.policy;
      Trace tr = e.plain_pg ? projected_gradient(f, x0, sc)
                            : accel_projected_gradient(f, x0, sc);
      tr.f_star_ref = summary.f_star_ref;
      RunSummary rs;
      rs.run_id = e.id;
      detail::fill_tolerance_marks(rs, tr, summary.f_star_ref,
                                   RelDenom::optimum_magnitude);
      detail::fill_restart_stats(rs, tr);
      summary.runs.push_back(std::move(rs));
      out.traces.push_back({e.id, std::move(tr)});
    }
    return out;
  }
}

struct SweepResult {
  std::string label;
  ExperimentResult result;
};

inline std::vector<SweepResult> sweep_experiment(ExperimentConfig base,
                                                 const std::string& param,
                                                 const std::vector<double>& values) {
  if (values.empty())
    throw std::invalid_argument("sweep: no parameter values given");
  std::vector<SweepResult> out;
  for (const double v : values) {
    ExperimentConfig cfg = base;
    cfg.apply_param(param, v);
    std::ostringstream label;
    label << param << '=' << v;
    out.push_back({label.str(), run_experiment(cfg)});
  }
  return out;
}

}  // namespace restartkit
