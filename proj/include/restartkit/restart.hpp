#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace restartkit {

// Function scheme: restart when the objective increased (strictly; ties and
// decreases keep the momentum).
inline bool should_restart_function(double f_curr, double f_prev) {
  if (std::isnan(f_curr) || std::isnan(f_prev))
    throw std::invalid_argument("should_restart_function: NaN objective");
  return f_curr > f_prev;
}

// Gradient scheme: restart when the last step moved against the gradient at
// the extrapolated point, grad(y_prev)'(x_curr - x_prev) > 0.
inline bool should_restart_gradient(const Eigen::VectorXd& grad_y_prev,
                                    const Eigen::VectorXd& x_curr,
                                    const Eigen::VectorXd& x_prev) {
  if (grad_y_prev.size() != x_curr.size() || x_curr.size() != x_prev.size())
    throw std::invalid_argument("should_restart_gradient: dimension mismatch");
  return grad_y_prev.dot(x_curr - x_prev) > 0.0;
}

// Generalized-gradient form of the same test for proximal/projected steps:
// (y_prev - x_curr)'(x_curr - x_prev) > 0. For an unconstrained smooth step
// y - t grad(y) this equals t times the gradient test, so decisions agree.
inline bool should_restart_generalized(const Eigen::VectorXd& y_prev,
                                       const Eigen::VectorXd& x_curr,
                                       const Eigen::VectorXd& x_prev) {
  if (y_prev.size() != x_curr.size() || x_curr.size() != x_prev.size())
    throw std::invalid_argument("should_restart_generalized: dimension mismatch");
  return (y_prev - x_curr).dot(x_curr - x_prev) > 0.0;
}

// Upper bound on the optimal fixed restart interval, e sqrt(8 L / mu).
inline double fixed_interval_bound(double mu, double L) {
  if (!(mu > 0.0) || !(mu <= L))
    throw std::invalid_argument("fixed_interval_bound: need 0 < mu <= L");
  return std::exp(1.0) * std::sqrt(8.0 * L / mu);
}

enum class RestartKind { none, fixed, function_adaptive, gradient_adaptive };

// Per-run restart policy. Solvers call commit() once per iteration after the
// new iterate is formed, passing the raw adaptive condition; commit applies
// the suppression window and bookkeeping. min_interval keeps floating-point
// noise near the optimum from firing the adaptive tests back to back; set it
// to 1 to reproduce the raw rules.
struct RestartPolicy {
  RestartKind kind = RestartKind::none;
  int interval = 0;       // fixed kind only
  int min_interval = 1;
  int steps_since_restart = 0;
  int total_restarts = 0;

  static RestartPolicy none() { return {}; }

  static RestartPolicy fixed(int k) {
    if (k < 1) throw std::invalid_argument("RestartPolicy::fixed: interval < 1");
    RestartPolicy p;
    p.kind = RestartKind::fixed;
    p.interval = k;
    return p;
  }

  static RestartPolicy function_adaptive(int min_interval = 5) {
    if (min_interval < 1)
      throw std::invalid_argument("RestartPolicy: min_interval < 1");
    RestartPolicy p;
    p.kind = RestartKind::function_adaptive;
    p.min_interval = min_interval;
    return p;
  }

  static RestartPolicy gradient_adaptive(int min_interval = 5) {
    if (min_interval < 1)
      throw std::invalid_argument("RestartPolicy: min_interval < 1");
    RestartPolicy p;
    p.kind = RestartKind::gradient_adaptive;
    p.min_interval = min_interval;
    return p;
  }

  // "none" | "fixed:<k>" | "func" | "grad"
  static RestartPolicy parse(std::string_view s) {
    if (s == "none") return none();
    if (s == "func") return function_adaptive();
    if (s == "grad") return gradient_adaptive();
    if (s.rfind("fixed:", 0) == 0) {
      const std::string num(s.substr(6));
      std::size_t pos = 0;
      int k = 0;
      try {
        k = std::stoi(num, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("RestartPolicy::parse: bad fixed interval");
      }
      if (pos != num.size() || k < 1)
        throw std::invalid_argument("RestartPolicy::parse: bad fixed interval");
      return fixed(k);
    }
    throw std::invalid_argument("RestartPolicy::parse: unknown policy '" +
                                std::string(s) + "'");
  }

  std::string name() const {
    switch (kind) {
      case RestartKind::none: return "none";
      case RestartKind::fixed: return "fixed:" + std::to_string(interval);
      case RestartKind::function_adaptive: return "func";
      case RestartKind::gradient_adaptive: return "grad";
    }
    return "none";
  }

  bool adaptive() const {
    return kind == RestartKind::function_adaptive ||
           kind == RestartKind::gradient_adaptive;
  }

  bool commit(bool adaptive_condition) {
    ++steps_since_restart;
    bool fire = false;
    switch (kind) {
      case RestartKind::none:
        break;
      case RestartKind::fixed:
        fire = steps_since_restart >= interval;
        break;
      case RestartKind::function_adaptive:
      case RestartKind::gradient_adaptive:
        fire = adaptive_condition && steps_since_restart >= min_interval;
        break;
    }
    if (fire) {
      steps_since_restart = 0;
      ++total_restarts;
    }
    return fire;
  }
};

}  // namespace restartkit
