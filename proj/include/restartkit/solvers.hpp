#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include <Eigen/Core>

#include "restartkit/momentum.hpp"
#include "restartkit/objectives.hpp"
#include "restartkit/restart.hpp"
#include "restartkit/trace.hpp"

namespace restartkit {

// Payload handed to an optional per-iteration observer on the smooth
// solvers: the extrapolated point the step was taken from, its gradient, and
// the surrounding iterates. Used by tests to cross-check restart criteria.
struct IterInfo {
  int k;
  const Vector& y_prev;
  const Vector& grad_y_prev;
  const Vector& x_prev;
  const Vector& x_curr;
  double step;
  bool restarted;
};
using IterObserver = std::function<void(const IterInfo&)>;

struct SolverConfig {
  std::optional<double> step_size;  // fixed t; empty selects backtracking
  double backtracking_t0 = 1.0;     // initial t when backtracking
  double q = 0.0;                   // strong-convexity estimate, in [0, 1]
  int max_iters = 1000;
  double tol = 0.0;                 // 0 disables the residual stop
  RestartPolicy restart = RestartPolicy::none();
  bool record_iterates = false;
  IterObserver observer;
};

namespace detail {

inline void check_config(const SolverConfig& cfg) {
  if (cfg.step_size && !(*cfg.step_size > 0.0))
    throw std::invalid_argument("SolverConfig: step_size must be > 0");
  if (!(cfg.backtracking_t0 > 0.0))
    throw std::invalid_argument("SolverConfig: backtracking_t0 must be > 0");
  if (!(cfg.q >= 0.0 && cfg.q <= 1.0))
    throw std::invalid_argument("SolverConfig: q outside [0, 1]");
  if (cfg.max_iters < 0)
    throw std::invalid_argument("SolverConfig: max_iters < 0");
}

inline void check_finite(double f, Trace& tr, const Vector& last_good) {
  if (!std::isfinite(f)) {
    tr.final_x = last_good;
    throw NumericError("solver diverged: objective not finite", std::move(tr));
  }
}

template <SmoothObjective F>
std::pair<double, Vector> backtrack_from(const F& f, const Vector& y,
                                         double f_y, const Vector& g,
                                         double t_init) {
  double t = t_init;
  while (true) {
    Vector x = y - t * g;
    const double fx = f.value(x);
    const Vector d = x - y;
    if (fx <= f_y + g.dot(d) + 0.5 / t * d.squaredNorm())
      return {t, std::move(x)};
    t *= 0.5;
    if (t < 1e-300)
      throw NumericError("backtracking: step size underflow", Trace{});
  }
}

}  // namespace detail

// Halve t from t_init until the descent-lemma test
//   f(x+) <= f(y) + grad(y)'(x+ - y) + ||x+ - y||^2 / (2t)
// accepts, with x+ = y - t grad(y). Returns the accepted t and x+.
template <SmoothObjective F>
std::pair<double, Vector> backtracking_step(const F& f, const Vector& y,
                                            double t_init) {
  if (!(t_init > 0.0))
    throw std::invalid_argument("backtracking_step: t_init must be > 0");
  check_dim(y, f.dim(), "backtracking_step");
  return detail::backtrack_from(f, y, f.value(y), f.gradient(y), t_init);
}

// x_{k+1} = x_k - t grad(x_k).
template <SmoothObjective F>
Trace gradient_descent(const F& f, const Vector& x0, const SolverConfig& cfg) {
  detail::check_config(cfg);
  check_dim(x0, f.dim(), "gradient_descent");
  Trace tr;
  Vector x = x0;
  double fx = f.value(x);
  double t = cfg.step_size.value_or(cfg.backtracking_t0);
  tr.records.push_back({0, fx, 0.0, 0.0, false});
  if (cfg.record_iterates) tr.iterates.push_back(x);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const Vector g = f.gradient(x);
    if (cfg.tol > 0.0 && g.norm() <= cfg.tol) break;
    Vector x_next;
    if (cfg.step_size) {
      x_next = x - t * g;
    } else {
      std::tie(t, x_next) = detail::backtrack_from(f, x, fx, g, t);
    }
    const double fx_next = f.value(x_next);
    detail::check_finite(fx_next, tr, x);
    tr.records.push_back({k, fx_next, 0.0, t, false});
    if (cfg.record_iterates) tr.iterates.push_back(x_next);
    x = std::move(x_next);
    fx = fx_next;
  }
  tr.final_x = x;
  return tr;
}

// Accelerated scheme with the theta/beta recurrence (q in [0, 1]; q = 1
// degenerates to gradient descent, q = mu/L is the optimal choice on a
// strongly convex function). The restart policy is consulted once per
// iteration, after x_{k+1} is formed and before the extrapolation; on a
// restart the extrapolation is skipped and theta reset to 1.
template <SmoothObjective F>
Trace accelerated_scheme1(const F& f, const Vector& x0, const SolverConfig& cfg) {
  detail::check_config(cfg);
  check_dim(x0, f.dim(), "accelerated_scheme1");
  Trace tr;
  Vector x = x0;
  Vector y = x0;
  MomentumState mom(cfg.q);
  RestartPolicy policy = cfg.restart;
  double fx = f.value(x);
  double t = cfg.step_size.value_or(cfg.backtracking_t0);
  tr.records.push_back({0, fx, 0.0, 0.0, false});
  if (cfg.record_iterates) tr.iterates.push_back(x);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const Vector g = f.gradient(y);
    Vector x_next;
    if (cfg.step_size) {
      x_next = y - t * g;
    } else {
      std::tie(t, x_next) = detail::backtrack_from(f, y, f.value(y), g, t);
    }
    const double fx_next = f.value(x_next);
    detail::check_finite(fx_next, tr, x);

    bool raw = false;
    if (policy.kind == RestartKind::function_adaptive)
      raw = should_restart_function(fx_next, fx);
    else if (policy.kind == RestartKind::gradient_adaptive)
      raw = should_restart_gradient(g, x_next, x);
    const bool fired = policy.commit(raw);
    if (cfg.observer) cfg.observer({k, y, g, x, x_next, t, fired});

    double beta = 0.0;
    if (fired) {
      mom.reset();
      y = x_next;
    } else {
      beta = mom.advance();
      y = x_next + beta * (x_next - x);
    }
    tr.records.push_back({k, fx_next, beta, t, fired});
    if (cfg.record_iterates) tr.iterates.push_back(x_next);
    x = std::move(x_next);
    fx = fx_next;
    if (cfg.tol > 0.0 && g.norm() <= cfg.tol && f.gradient(x).norm() <= cfg.tol)
      break;
  }
  tr.final_x = x;
  return tr;
}

// Constant-momentum scheme for known mu and L: beta* extrapolation every
// step, default step 1/L.
template <SmoothObjective F>
Trace accelerated_scheme2(const F& f, const Vector& x0, double mu, double L,
                          const SolverConfig& cfg) {
  detail::check_config(cfg);
  check_dim(x0, f.dim(), "accelerated_scheme2");
  const double bstar = beta_star(mu, L);
  Trace tr;
  Vector x = x0;
  Vector y = x0;
  RestartPolicy policy = cfg.restart;
  double fx = f.value(x);
  const double t = cfg.step_size.value_or(1.0 / L);
  tr.records.push_back({0, fx, 0.0, 0.0, false});
  if (cfg.record_iterates) tr.iterates.push_back(x);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const Vector g = f.gradient(y);
    Vector x_next = y - t * g;
    const double fx_next = f.value(x_next);
    detail::check_finite(fx_next, tr, x);

    bool raw = false;
    if (policy.kind == RestartKind::function_adaptive)
      raw = should_restart_function(fx_next, fx);
    else if (policy.kind == RestartKind::gradient_adaptive)
      raw = should_restart_gradient(g, x_next, x);
    const bool fired = policy.commit(raw);
    if (cfg.observer) cfg.observer({k, y, g, x, x_next, t, fired});

    double beta = 0.0;
    if (fired) {
      y = x_next;
    } else {
      beta = bstar;
      y = x_next + beta * (x_next - x);
    }
    tr.records.push_back({k, fx_next, beta, t, fired});
    if (cfg.record_iterates) tr.iterates.push_back(x_next);
    x = std::move(x_next);
    fx = fx_next;
    if (cfg.tol > 0.0 && g.norm() <= cfg.tol && f.gradient(x).norm() <= cfg.tol)
      break;
  }
  tr.final_x = x;
  return tr;
}

// ISTA: x_{k+1} = T_{rho t}(x_k - t A'(A x_k - b)). One forward and one
// adjoint multiply per iteration; A x is carried between iterations so the
// composite objective comes for free.
inline Trace ista(const LassoProblem& p, const Vector& x0,
                  const SolverConfig& cfg) {
  detail::check_config(cfg);
  check_dim(x0, p.dim(), "ista");
  const double t = cfg.step_size.value_or(1.0 / p.lipschitz());
  Trace tr;
  Vector x = x0;
  Vector ax = p.apply(x);
  double fx = p.composite_value_from_product(ax, x);
  tr.records.push_back({0, fx, 0.0, 0.0, false});
  if (cfg.record_iterates) tr.iterates.push_back(x);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const Vector grad = p.apply_adjoint(ax - p.b());
    Vector x_next = soft_threshold(x - t * grad, p.rho() * t);
    Vector ax_next = p.apply(x_next);
    const double fx_next = p.composite_value_from_product(ax_next, x_next);
    detail::check_finite(fx_next, tr, x);
    tr.records.push_back({k, fx_next, 0.0, t, false});
    if (cfg.record_iterates) tr.iterates.push_back(x_next);
    const double residual = (x - x_next).norm() / t;
    x = std::move(x_next);
    ax = std::move(ax_next);
    fx = fx_next;
    if (cfg.tol > 0.0 && residual <= cfg.tol) break;
  }
  tr.final_x = x;
  return tr;
}

// FISTA with optional adaptive restart. The extrapolated point's product
// A y is the same linear combination of cached A x values as y is of the
// iterates, so each iteration still costs one forward and one adjoint
// multiply and both restart tests are free: the function test compares
// cached composite values, the gradient test is the generalized form
// (y - x+)'(x+ - x) > 0.
inline Trace fista(const LassoProblem& p, const Vector& x0,
                   const SolverConfig& cfg) {
  detail::check_config(cfg);
  check_dim(x0, p.dim(), "fista");
  const double t = cfg.step_size.value_or(1.0 / p.lipschitz());
  Trace tr;
  Vector x = x0;
  Vector x_prev = x0;
  Vector ax = p.apply(x);
  Vector ax_prev = ax;
  FistaMomentum mom;
  RestartPolicy policy = cfg.restart;
  double beta = 0.0;
  double fx = p.composite_value_from_product(ax, x);
  tr.records.push_back({0, fx, 0.0, 0.0, false});
  if (cfg.record_iterates) tr.iterates.push_back(x);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const Vector y = x + beta * (x - x_prev);
    const Vector ay = ax + beta * (ax - ax_prev);
    const Vector grad = p.apply_adjoint(ay - p.b());
    Vector x_next = soft_threshold(y - t * grad, p.rho() * t);
    Vector ax_next = p.apply(x_next);
    const double fx_next = p.composite_value_from_product(ax_next, x_next);
    detail::check_finite(fx_next, tr, x);

    bool raw = false;
    if (policy.kind == RestartKind::function_adaptive)
      raw = should_restart_function(fx_next, fx);
    else if (policy.kind == RestartKind::gradient_adaptive)
      raw = should_restart_generalized(y, x_next, x);
    const bool fired = policy.commit(raw);
    if (fired) {
      mom.reset();
      beta = 0.0;
    } else {
      beta = mom.advance();
    }
    tr.records.push_back({k, fx_next, beta, t, fired});
    if (cfg.record_iterates) tr.iterates.push_back(x_next);
    const double residual = (x - x_next).norm() / t;
    x_prev = std::move(x);
    x = std::move(x_next);
    ax_prev = std::move(ax);
    ax = std::move(ax_next);
    fx = fx_next;
    if (cfg.tol > 0.0 && residual <= cfg.tol) break;
  }
  tr.final_x = x;
  return tr;
}

// Plain projected gradient: x_{k+1} = proj(x_k - t (Q x_k + q)).
inline Trace projected_gradient(const BoxQP& qp, const Vector& x0,
                                const SolverConfig& cfg) {
  detail::check_config(cfg);
  check_dim(x0, qp.dim(), "projected_gradient");
  const double t = cfg.step_size.value_or(1.0 / qp.L());
  Trace tr;
  Vector x = x0;
  double fx = qp.value(x);
  tr.records.push_back({0, fx, 0.0, 0.0, false});
  if (cfg.record_iterates) tr.iterates.push_back(x);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    Vector x_next = qp.project(x - t * qp.gradient(x));
    const double fx_next = qp.value(x_next);
    detail::check_finite(fx_next, tr, x);
    tr.records.push_back({k, fx_next, 0.0, t, false});
    if (cfg.record_iterates) tr.iterates.push_back(x_next);
    const double residual = (x - x_next).norm() / t;
    x = std::move(x_next);
    fx = fx_next;
    if (cfg.tol > 0.0 && residual <= cfg.tol) break;
  }
  tr.final_x = x;
  return tr;
}

// Accelerated projected gradient (theta recurrence with q = 0), restart via
// the generalized-gradient test or the objective test.
inline Trace accel_projected_gradient(const BoxQP& qp, const Vector& x0,
                                      const SolverConfig& cfg) {
  detail::check_config(cfg);
  check_dim(x0, qp.dim(), "accel_projected_gradient");
  const double t = cfg.step_size.value_or(1.0 / qp.L());
  Trace tr;
  Vector x = x0;
  Vector y = x0;
  MomentumState mom(0.0);
  RestartPolicy policy = cfg.restart;
  double fx = qp.value(x);
  tr.records.push_back({0, fx, 0.0, 0.0, false});
  if (cfg.record_iterates) tr.iterates.push_back(x);
  for (int k = 1; k <= cfg.max_iters; ++k) {
    Vector x_next = qp.project(y - t * qp.gradient(y));
    const double fx_next = qp.value(x_next);
    detail::check_finite(fx_next, tr, x);

    bool raw = false;
    if (policy.kind == RestartKind::function_adaptive)
      raw = should_restart_function(fx_next, fx);
    else if (policy.kind == RestartKind::gradient_adaptive)
      raw = should_restart_generalized(y, x_next, x);
    const bool fired = policy.commit(raw);

    double beta = 0.0;
    if (fired) {
      mom.reset();
      y = x_next;
    } else {
      beta = mom.advance();
      y = x_next + beta * (x_next - x);
    }
    tr.records.push_back({k, fx_next, beta, t, fired});
    if (cfg.record_iterates) tr.iterates.push_back(x_next);
    const double residual = (x - x_next).norm() / t;
    x = std::move(x_next);
    fx = fx_next;
    if (cfg.tol > 0.0 && residual <= cfg.tol) break;
  }
  tr.final_x = x;
  return tr;
}

}  // namespace restartkit
