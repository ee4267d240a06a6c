#pragma once

#include <cmath>
#include <stdexcept>

namespace restartkit {

// Next theta in the accelerated scheme: the root in (0, 1] of
//   theta^2 + (theta_k^2 - q) theta - theta_k^2 = 0.
// Evaluated in the conjugate form when theta_k^2 - q > 0; the naive
// quadratic formula cancels badly once theta_k ~ 1/k.
inline double theta_next(double theta_k, double q) {
  if (!(theta_k > 0.0 && theta_k <= 1.0))
    throw std::invalid_argument("theta_next: theta_k outside (0, 1]");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("theta_next: q outside [0, 1]");
  const double b = theta_k * theta_k - q;
  const double disc = std::sqrt(b * b + 4.0 * theta_k * theta_k);
  if (b > 0.0) return 2.0 * theta_k * theta_k / (b + disc);
  return 0.5 * (-b + disc);
}

// beta_{k+1} = theta_k (1 - theta_k) / (theta_k^2 + theta_{k+1}).
inline double beta_from_theta(double theta_k, double theta_kp1) {
  if (!(theta_k > 0.0 && theta_k <= 1.0) || !(theta_kp1 > 0.0 && theta_kp1 <= 1.0))
    throw std::invalid_argument("beta_from_theta: thetas outside (0, 1]");
  return theta_k * (1.0 - theta_k) / (theta_k * theta_k + theta_kp1);
}

// Constant momentum for known strong convexity:
// beta* = (1 - sqrt(mu/L)) / (1 + sqrt(mu/L)).
inline double beta_star(double mu, double L) {
  if (!(mu > 0.0) || !(mu <= L))
    throw std::invalid_argument("beta_star: need 0 < mu <= L");
  const double r = std::sqrt(mu / L);
  return (1.0 - r) / (1.0 + r);
}

// FISTA theta update: theta_{k+1} = (1 + sqrt(1 + 4 theta_k^2)) / 2.
inline double fista_theta_next(double theta) {
  if (!(theta >= 1.0)) throw std::invalid_argument("fista_theta_next: theta < 1");
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
}

// theta/beta state for the general accelerated scheme. advance() moves to the
// next iteration and returns the beta to apply; reset() is the restart action
// (theta back to 1, so the following step is a pure gradient step).
struct MomentumState {
  double theta = 1.0;
  double q = 0.0;
  double beta = 0.0;

  explicit MomentumState(double q_in = 0.0) : q(q_in) {
    if (!(q >= 0.0 && q <= 1.0))
      throw std::invalid_argument("MomentumState: q outside [0, 1]");
  }

  double advance() {
    const double t_next = theta_next(theta, q);
    beta = beta_from_theta(theta, t_next);
    theta = t_next;
    return beta;
  }

  void reset() {
    theta = 1.0;
    beta = 0.0;
  }
};

// FISTA momentum state; theta grows without bound, beta = (theta_k - 1)/theta_{k+1}.
struct FistaMomentum {
  double theta = 1.0;
  double beta = 0.0;

  double advance() {
    const double t_next = fista_theta_next(theta);
    beta = (theta - 1.0) / t_next;
    theta = t_next;
    return beta;
  }

  void reset() {
    theta = 1.0;
    beta = 0.0;
  }
};

}  // namespace restartkit
